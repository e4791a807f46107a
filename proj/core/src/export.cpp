#include "divflow/export.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "divflow/error.hpp"
#include "divflow/field_io.hpp"
#include "json.hpp"

namespace divflow::io {

using nlohmann::json;

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

namespace {

json number(double x) { return std::isfinite(x) ? json(x) : json(fmt(x)); }

json node_list(const NodeSet& s) { return json(s); }

json contacts_json(const std::vector<Contact>& labels) {
  NodeSet up, lo;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == Contact::Upper) up.push_back(k);
    if (labels[k] == Contact::Lower) lo.push_back(k);
  }
  return {{"upper", up}, {"lower", lo}};
}

}  // namespace

void save_problem(const std::filesystem::path& stem, const ObstacleProblem& p) {
  json j;
  j["grid"] = json::parse(grid_header_json(*p.u0.grid()));
  j["bound"] = number(p.bound);
  j["tol"] = p.tol;
  j["max_iters"] = p.max_iters;
  j["omega"] = p.omega;
  j["order"] = p.order == SweepOrder::RedBlack ? "red-black" : "lexicographic";
  j["has_center"] = p.center.has_value();
  write_text(stem.string() + ".json", j.dump(2) + "\n");
  std::ostringstream os;
  write_face_csv(os, p.u0);
  write_text(stem.string() + "_u0.csv", os.str());
  if (p.center) {
    std::ostringstream cs;
    write_node_csv(cs, *p.center);
    write_text(stem.string() + "_center.csv", cs.str());
  }
}

ObstacleProblem load_problem(const std::filesystem::path& stem) {
  json j;
  try {
    j = json::parse(read_text(stem.string() + ".json"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, std::string("problem JSON: ") + e.what());
  }
  try {
    auto grid = grid_from_header_json(j.at("grid").dump());
    ObstacleProblem p;
    std::istringstream is(read_text(stem.string() + "_u0.csv"));
    p.u0 = read_face_csv(is, grid);
    const auto& b = j.at("bound");
    p.bound = b.is_string() ? (b.get<std::string>() == "inf" ? kUnbounded : std::stod(b.get<std::string>()))
                            : b.get<double>();
    p.tol = j.value("tol", 0.0);
    p.max_iters = j.value("max_iters", 0L);
    p.omega = j.value("omega", 0.0);
    p.order = j.value("order", std::string("lexicographic")) == "red-black" ? SweepOrder::RedBlack
                                                                             : SweepOrder::Lexicographic;
    if (j.value("has_center", false)) {
      std::istringstream cs(read_text(stem.string() + "_center.csv"));
      p.center = read_node_csv(cs, grid);
    }
    return p;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, std::string("problem JSON: ") + e.what());
  }
}

void save_solution(const std::filesystem::path& stem, const ObstacleSolution& s) {
  json j;
  j["grid"] = json::parse(grid_header_json(*s.w.grid()));
  j["kkt_residual"] = s.kkt_residual;
  j["energy"] = s.energy;
  j["iterations"] = s.iterations;
  j["converged"] = s.converged;
  j["contacts"] = contacts_json(s.labels);
  write_text(stem.string() + ".json", j.dump(2) + "\n");
  std::ostringstream os;
  write_node_csv(os, s.w);
  write_text(stem.string() + ".csv", os.str());
}

void write_state_csv(std::ostream& os, const FlowState& s) {
  const Grid& g = *s.w.grid();
  os << "field,axis,i,j,x,y,value\n";
  auto nodes = [&](const char* name, auto&& value) {
    for (std::size_t k = 0; k < g.node_count(); ++k) {
      auto [i, j] = g.node_ij(k);
      auto x = g.node_coord(k);
      os << name << ",-1," << i << ',' << j << ',' << fmt(x[0]) << ',' << fmt(x[1]) << ',' << fmt(value(k)) << '\n';
    }
  };
  nodes("w", [&](std::size_t k) { return s.w[k]; });
  if (s.has_velocity()) nodes("v", [&](std::size_t k) { return s.v[k]; });
  nodes("divu", [&](std::size_t k) { return s.divu[k]; });
  for (int a = 0; a < g.dim(); ++a) {
    auto c = s.u.component(a);
    for (std::size_t f = 0; f < c.size(); ++f) {
      auto [i, j] = g.face_ij(a, f);
      auto x = g.face_center(a, f);
      os << "u," << a << ',' << i << ',' << j << ',' << fmt(x[0]) << ',' << fmt(x[1]) << ',' << fmt(c[f]) << '\n';
    }
  }
}

std::vector<std::string> export_trajectory(const std::filesystem::path& dir, const Trajectory& traj) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  json states = json::array();
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const auto& s = traj.states[i];
    char name[32];
    std::snprintf(name, sizeof name, "state_%03zu.csv", i);
    std::ostringstream os;
    write_state_csv(os, s);
    write_text(dir / name, os.str());
    files.emplace_back(name);
    json js;
    js["t"] = s.t;
    js["file"] = name;
    js["E_plus"] = node_list(s.e_plus);
    js["E_minus"] = node_list(s.e_minus);
    js["Er_plus"] = node_list(s.er_plus);
    js["Er_minus"] = node_list(s.er_minus);
    js["dt_probe"] = s.dt_probe;
    js["kkt_residual"] = s.kkt_residual;
    js["iterations"] = s.iterations;
    js["converged"] = s.converged;
    js["divergence_mass"] = total_mass(s.divu);
    states.push_back(js);
  }
  json j;
  j["grid"] = json::parse(grid_header_json(*traj.u0.grid()));
  j["tol"] = traj.tol;
  json times = json::array();
  for (const auto& s : traj.states) times.push_back(s.t);
  j["times"] = times;
  j["states"] = states;
  write_text(dir / "trajectory.json", j.dump(2) + "\n");
  files.emplace_back("trajectory.json");
  return files;
}

IterationObserver diagnostics_writer(std::ostream& os) {
  os << "iteration,energy,residual\n";
  return [&os](const IterationInfo& it) {
    os << it.iteration << ',' << fmt(it.energy) << ',' << fmt(it.residual) << '\n';
  };
}

Signal read_signal_csv(const std::filesystem::path& path) {
  std::istringstream is(read_text(path));
  std::string line;
  std::vector<double> xs, vs;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::Io, path.string() + ": expected two columns");
    try {
      const double x = std::stod(line.substr(0, comma));
      const double v = std::stod(line.substr(comma + 1));
      xs.push_back(x);
      vs.push_back(v);
    } catch (const std::exception&) {
      if (xs.empty() && vs.empty()) continue;  // header row
      throw Error(ErrorCode::Io, path.string() + ": malformed row '" + line + "'");
    }
  }
  if (xs.size() < 2) throw Error(ErrorCode::Io, path.string() + ": need at least 2 samples");
  const double h = (xs.back() - xs.front()) / (xs.size() - 1);
  if (!(h > 0.0)) throw Error(ErrorCode::Io, path.string() + ": x must increase");
  for (std::size_t k = 0; k < xs.size(); ++k)
    if (std::abs(xs[k] - (xs.front() + k * h)) > 1e-6 * h) throw Error(ErrorCode::Io, path.string() + ": x must be uniform");
  return make_signal(std::move(vs), xs.front() - 0.5 * h, xs.back() + 0.5 * h);
}

void write_signal_csv(const std::filesystem::path& path, const Signal& s) {
  std::ostringstream os;
  os << "x,value\n";
  for (std::size_t f = 0; f < s.size(); ++f) os << fmt(s.grid->face_center(0, f)[0]) << ',' << fmt(s.samples[f]) << '\n';
  write_text(path, os.str());
}

}  // namespace divflow::io
