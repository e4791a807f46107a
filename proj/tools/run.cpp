#include "run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "divflow/error.hpp"
#include "divflow/export.hpp"
#include "divflow/field_io.hpp"
#include "divflow/fixtures.hpp"
#include "divflow/parallel.hpp"
#include "divflow/prox.hpp"
#include "divflow/tv1d.hpp"
#include "json.hpp"

#ifndef DIVFLOW_VERSION
#define DIVFLOW_VERSION "unknown"
#endif

namespace divflow::cli {

using nlohmann::json;
namespace fs = std::filesystem;
using io::fmt;

namespace {

struct Ctx {
  const RunConfig& c;
  RunResult& r;
  fs::path out;

  void check(const std::string& name, bool pass, double value, double limit) {
    r.checks.push_back({name, pass, value, limit});
  }
  void file(const std::string& name) { r.files.push_back(name); }
  void write(const std::string& name, const std::string& text) {
    io::write_text(out / name, text);
    file(name);
  }
  void converged(bool ok) { r.converged = r.converged && ok; }
};

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ConfigInvalid, field + ": " + why);
}

FaceField load_datum(const RunConfig& c, std::uint64_t seed) {
  const auto& d = c.datum;
  if (!d.fixture.empty()) {
    FixtureParams p;
    p.n = c.n;
    p.sigma = d.sigma;
    p.seed = seed;
    return load_fixture(d.fixture, p);
  }
  if (!d.csv.empty()) return io::read_signal_csv(d.csv).field();
  if (d.radial) return lift_radial(*d.radial, Grid::disk(c.outer_radius, c.n > 0 ? c.n : 129));
  if (d.noise) return make_rough_path(c.n > 0 ? c.n : 2000, d.sigma, seed).field();
  bad("datum", "missing");
}

std::vector<double> uniform_times(double dt, double t_end) {
  std::vector<double> t;
  for (long i = 1; static_cast<double>(i) * dt <= t_end * (1.0 + 1e-12); ++i) t.push_back(static_cast<double>(i) * dt);
  return t;
}

// few random jumps on a low frequency profile
FaceField random_signal(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> J(1, 4);
  const int jumps = J(rng);
  std::vector<double> at(jumps), size(jumps);
  for (int j = 0; j < jumps; ++j) {
    at[j] = g->lo(0) + (g->hi(0) - g->lo(0)) * 0.5 * (U(rng) + 1.0);
    size[j] = U(rng);
  }
  const double a1 = U(rng), a2 = 0.5 * U(rng), ph = 3.0 * (U(rng) + 1.0);
  return sample_faces(g, [&](int, std::array<double, 2> x) {
    double v = a1 * std::sin(2.0 * x[0] + ph) + a2 * std::cos(7.0 * x[0]);
    for (int j = 0; j < jumps; ++j)
      if (x[0] > at[j]) v += size[j];
    return v;
  });
}

FaceField random_faces(const GridPtr& g, std::mt19937_64& rng, double amp) {
  std::uniform_real_distribution<double> U(-amp, amp);
  FaceField u(g);
  for (int a = 0; a < g->dim(); ++a)
    for (double& x : u.component(a)) x = U(rng);
  return u;
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& x : cells) s += (s.empty() ? "" : ",") + x;
  return s + "\n";
}

double divergence_mass(const FlowState& s) { return total_mass(s.divu); }

// Closed-form flow of the remark datum, valid while the left plateau stays
// below the plateau at 1/3.
struct Remark {
  double t;
  double a() const { return 1.0 / 3.0 + 2.0 * std::sqrt(t / 3.0); }
  double b() const { return 1.0 - std::sqrt(1.0 + 6.0 * t) / 3.0; }
  double u(double x) const {
    if (x < 1.0 / 3.0) return 3.0 * t;
    if (x < a()) return 1.0 - 2.0 * std::sqrt(3.0 * t);
    if (x < b()) return 2.0 - 3.0 * x;
    return std::sqrt(1.0 + 6.0 * t) - 1.0;
  }
  static double t_max() { return (std::sqrt(2.0) - 1.0) * (std::sqrt(2.0) - 1.0) / 3.0; }
};

void remark_checks(Ctx& ctx, const Trajectory& traj) {
  const Grid& g = *traj.u0.grid();
  const double h = g.h(0);
  for (const auto& s : traj.states) {
    if (s.t <= 0.0 || s.t > Remark::t_max()) continue;
    const Remark R{s.t};
    const std::string tag = "@t=" + fmt(s.t);
    double err = 0.0;
    auto u = s.u.component(0);
    for (std::size_t f = 0; f < u.size(); ++f) {
      const double x = g.face_center(0, f)[0];
      if (std::abs(x - 1.0 / 3.0) <= 2.0 * h || std::abs(x - R.a()) <= 2.0 * h || std::abs(x - R.b()) <= 2.0 * h) continue;
      err = std::max(err, std::abs(u[f] - R.u(x)));
    }
    ctx.check("remark_closed_form" + tag, err <= 5.0 * h, err, 5.0 * h);
    if (s.e_minus.empty()) {
      ctx.check("remark_interfaces" + tag, false, kUnbounded, 2.0 * h);
      continue;
    }
    const double a_est = g.node_coord(s.e_minus.front())[0], b_est = g.node_coord(s.e_minus.back())[0];
    const double ierr = std::max(std::abs(a_est - R.a()), std::abs(b_est - R.b()));
    ctx.check("remark_interfaces" + tag, ierr <= 2.0 * h, ierr, 2.0 * h);
  }
}

void flow_checks(Ctx& ctx, const Trajectory& traj) {
  const auto st = check_structure(traj);
  const std::size_t sv = st.lipschitz_violations + st.set_monotonicity_violations + st.disjointness_violations +
                         st.energy_violations + st.mass_violations + st.velocity_bound_violations +
                         st.contact_velocity_violations + st.kkt_violations;
  ctx.check("structure", st.ok(), static_cast<double>(sv), 0.0);
  ctx.check("max_velocity", st.max_velocity <= 1.0 + 1e-3, st.max_velocity, 1.0 + 1e-3);
  const auto mono = measure_monotonicity(traj);
  ctx.check("divergence_monotone", mono.ok(),
            static_cast<double>(mono.positive_violations + mono.negative_violations + mono.support_violations), 0.0);
  const auto ev = evoldiv_check(traj);
  ctx.check("contact_set_law", ev.ok(),
            static_cast<double>(ev.core_violations + ev.bracket_violations + ev.off_violations), 0.0);
  double worst = 0.0, last = total_mass(divergence(traj.u0));
  for (const auto& s : traj.states) {
    worst = std::max(worst, divergence_mass(s) - last);
    last = divergence_mass(s);
  }
  const double slack = 1e-9 * std::max(1.0, total_mass(divergence(traj.u0)));
  ctx.check("total_variation_monotone", worst <= slack, worst, slack);
}

void run_flow(Ctx& ctx, int dim) {
  const auto& c = ctx.c;
  auto u0 = load_datum(c, c.seed);
  if (u0.grid()->dim() != dim) bad("datum", c.kind + " needs a " + std::to_string(dim) + "D datum");
  auto traj = evolve(u0, c.times, c.flow_options());
  ctx.converged(traj.converged());
  for (const auto& f : io::export_trajectory(ctx.out, traj)) ctx.file(f);
  flow_checks(ctx, traj);
  if (dim == 1 && c.datum.fixture == "paper-remark-1d") remark_checks(ctx, traj);
  const bool radial = c.datum.radial.has_value() || c.datum.fixture == "radial-disk";
  if (dim == 2 && radial) {
    const double h = u0.grid()->h(0);
    double dev = 0.0;
    for (const auto& s : traj.states) dev = std::max(dev, radial_deviation(s.w));
    ctx.check("radial_symmetry", dev <= 10.0 * h, dev, 10.0 * h);
  }
}

std::vector<std::uint64_t> seed_list(const RunConfig& c) {
  if (!c.seeds.empty()) return c.seeds;
  std::vector<std::uint64_t> s;
  for (int i = 0; i < c.count; ++i) s.push_back(c.seed + static_cast<std::uint64_t>(i));
  return s;
}

void write_plateaus(Ctx& ctx, const std::string& name, const StaircaseSummary& s) {
  std::string text = "seed,t,plateau_fraction,window_coverage,runs\n";
  for (std::size_t i = 0; i < s.seeds.size(); ++i)
    text += csv_line({std::to_string(s.seeds[i]), fmt(s.times[i]), fmt(s.reports[i].plateau_fraction),
                      fmt(s.reports[i].window_coverage), std::to_string(s.reports[i].runs.size())});
  ctx.write(name, text);
}

void run_staircase(Ctx& ctx) {
  const auto& c = ctx.c;
  Signal base;
  if (!c.datum.fixture.empty() || !c.datum.csv.empty()) {
    auto u = load_datum(c, c.seed);
    if (u.grid()->dim() != 1) bad("datum", "staircase needs a 1D base signal");
    base = Signal::from_field(u);
  } else {
    base = make_signal(std::vector<double>(static_cast<std::size_t>(c.n > 0 ? c.n : 2000), 0.0));
  }
  const double sigma = c.datum.noise ? c.datum.sigma : 0.0;
  const auto seeds = seed_list(c);
  if (seeds.empty()) bad("seeds", "need at least one seed (seeds or count)");
  StaircaseOptions o;
  o.min_run = c.min_run;
  o.delta = c.delta;
  o.range_scaled = c.range_scaled;
  o.threads = c.effective_threads();
  o.flow = c.flow_options();
  const auto at_t = staircase_experiment(base, sigma, c.t, seeds, o);
  const auto at_0 = staircase_experiment(base, sigma, 0.0, seeds, o);
  ctx.converged(at_t.converged && at_0.converged);
  write_plateaus(ctx, "plateaus.csv", at_t);
  write_plateaus(ctx, "plateaus_t0.csv", at_0);
  json s = {{"t", c.t},
            {"sigma", sigma},
            {"seeds", seeds.size()},
            {"mean_fraction", at_t.mean_fraction},
            {"mean_coverage", at_t.mean_coverage},
            {"mean_fraction_t0", at_0.mean_fraction},
            {"mean_coverage_t0", at_0.mean_coverage},
            {"window", at_t.reports.empty() ? 0 : at_t.reports.front().window},
            {"min_run", c.min_run}};
  ctx.write("summary.json", s.dump(2) + "\n");
  if (c.t > 0.0) ctx.check("coverage_grows", at_t.mean_coverage > at_0.mean_coverage, at_t.mean_coverage, at_0.mean_coverage);
  if (c.coverage_bar) ctx.check("coverage_bar", at_t.mean_coverage >= *c.coverage_bar, at_t.mean_coverage, *c.coverage_bar);
}

void run_compare(Ctx& ctx) {
  const auto& c = ctx.c;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const int n = c.n > 0 ? c.n : (c.dim == 1 ? 101 : 33);
  auto g = c.dim == 1 ? Grid::line(0.0, 1.0, n) : Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {n, n});
  std::string text = "pair,checks,potential_violations,set_violations,velocity_violations,max_potential_excess,strict\n";
  std::size_t bad_pairs = 0, strict = 0;
  for (int i = 0; i < c.count; ++i) {
    auto u0 = c.dim == 1 ? random_signal(g, rng) : random_faces(g, rng, 0.5);
    // convex psi: u0p = u0 - grad psi has div u0p <= div u0
    const double al = 2.0 * U(rng), be = 0.5 * U(rng), ga = 0.5 * U(rng);
    const double cx = U(rng), cy = U(rng), dx = U(rng), dy = U(rng);
    auto psi = sample_nodes(g, [&](std::array<double, 2> x) {
      const double q = (x[0] - cx) * (x[0] - cx) + (c.dim == 2 ? (x[1] - cy) * (x[1] - cy) : 0.0);
      return al * q + be * std::abs(x[0] - dx) + (c.dim == 2 ? ga * std::abs(x[1] - dy) : 0.0);
    });
    auto u0p = u0 - gradient(psi);
    auto rep = compare_flows(u0, u0p, c.times, c.flow_options());
    if (!rep.ok()) ++bad_pairs;
    if (rep.strict_somewhere) ++strict;
    text += csv_line({std::to_string(i), std::to_string(rep.checks), std::to_string(rep.potential_violations),
                      std::to_string(rep.set_violations), std::to_string(rep.velocity_violations),
                      fmt(rep.max_potential_excess), rep.strict_somewhere ? "1" : "0"});
  }
  ctx.write("compare.csv", text);
  ctx.check("comparison_principle", bad_pairs == 0, static_cast<double>(bad_pairs), 0.0);
}

void run_prox(Ctx& ctx) {
  const auto& c = ctx.c;
  std::mt19937_64 rng(c.seed);
  const int n = c.n > 0 ? c.n : (c.dim == 1 ? 201 : 33);
  auto g = c.dim == 1 ? Grid::line(0.0, 1.0, n) : Grid::rectangle({0.0, 0.0}, {1.0, 1.0}, {n, n});
  const double limit = c.max_gap.value_or(c.dim == 1 ? 1e-6 : 1e-5);
  std::string text = "case,t,relative_gap,error_bound,divergence_mass,iterations,converged\n";
  double worst = 0.0;
  for (int i = 0; i < c.count; ++i) {
    auto u0 = c.dim == 1 ? random_signal(g, rng) : random_faces(g, rng, 0.5);
    for (double t : c.times) {
      auto rep = prox_check(u0, t, c.flow_options());
      ctx.converged(rep.converged);
      worst = std::max(worst, rep.relative_gap);
      text += csv_line({std::to_string(i), fmt(t), fmt(rep.relative_gap), fmt(rep.error_bound),
                        fmt(rep.divergence_mass), std::to_string(rep.iterations), rep.converged ? "1" : "0"});
    }
  }
  ctx.write("prox.csv", text);
  ctx.check("prox_gap", worst <= limit, worst, limit);
}

double collapse_time(const RadialDatum& d, double outer) {
  const double c = d.annuli.at(0).value, r0 = d.annuli.at(0).r_hi;
  return c * (0.5 * r0 * r0 * std::log(outer / r0) + 0.25 * r0 * r0);
}

void run_heleshaw(Ctx& ctx) {
  const auto& c = ctx.c;
  RadialDatum d = c.datum.radial ? *c.datum.radial : radial_disk_datum();
  if (!c.datum.fixture.empty() && c.datum.fixture != "radial-disk") bad("datum", "heleshaw-radial needs a radial datum");
  const int n = c.n > 0 ? c.n : 129;
  auto g = Grid::disk(c.outer_radius, n);
  std::vector<double> times;
  try {
    const double t_end = c.t_end > 0.0 ? c.t_end : 0.5 * collapse_time(d, c.outer_radius);
    times = uniform_times(c.dt, t_end);
    (void)radial_oracle(d, c.outer_radius, times);
  } catch (const Error& e) {
    bad("datum.radial", std::string("front oracle needs one disk g = c > 0 on r < R0 (") + e.what() + ")");
  }
  if (times.empty()) bad("dt", "no sample times before t_end");
  auto o = c.flow_options();
  o.with_velocity = false;
  auto traj = evolve(lift_radial(d, g), times, o);
  ctx.converged(traj.converged());
  auto rows = compare_front(traj, radial_oracle(d, c.outer_radius, times));
  write_front_csv(ctx.out / "front.csv", rows);
  ctx.file("front.csv");
  double worst = 0.0;
  bool mono = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    worst = std::max(worst, rows[i].rel_err);
    if (i > 0 && rows[i].r_est > rows[i - 1].r_est) mono = false;
  }
  ctx.check("front_rel_err", worst <= c.max_rel_err, worst, c.max_rel_err);
  ctx.check("front_monotone", mono, mono ? 0.0 : 1.0, 0.0);
  double dev = 0.0;
  for (const auto& s : traj.states) dev = std::max(dev, radial_deviation(s.w));
  ctx.check("radial_symmetry", dev <= 10.0 * g->h(0), dev, 10.0 * g->h(0));
  const auto ev = evoldiv_check(traj);
  ctx.check("contact_set_law", ev.ok(), static_cast<double>(ev.core_violations + ev.bracket_violations + ev.off_violations),
            0.0);
}

void run_weakform(Ctx& ctx) {
  const auto& c = ctx.c;
  RadialDatum d = c.datum.radial ? *c.datum.radial : radial_disk_datum();
  const auto family = default_weak_family();
  auto o = c.flow_options();
  o.with_velocity = false;
  std::string text = "level,n,h,dt,test,forward,reversed\n";
  double fwd_max[2] = {0.0, 0.0};
  bool reversal_larger = true;
  for (int level = 0; level < 2; ++level) {
    const int n = level == 0 ? c.n : 2 * c.n - 1;
    const double dt = level == 0 ? c.dt : 0.5 * c.dt;
    auto g = Grid::disk(c.outer_radius, n);
    auto traj = evolve(lift_radial(d, g), uniform_times(dt, c.t_end), o);
    ctx.converged(traj.converged());
    const auto fwd = weak_form_residual(traj, family);
    const auto rev = weak_form_residual(time_reversed(traj), family);
    fwd_max[level] = fwd.max_residual;
    if (!(rev.max_residual > fwd.max_residual)) reversal_larger = false;
    for (std::size_t k = 0; k < family.size(); ++k)
      text += csv_line({std::to_string(level), std::to_string(n), fmt(g->h(0)), fmt(dt), std::to_string(k),
                        fmt(fwd.residuals[k]), fmt(rev.residuals[k])});
  }
  ctx.write("weakform.csv", text);
  const double ratio = fwd_max[1] > 0.0 ? fwd_max[0] / fwd_max[1] : kUnbounded;
  ctx.write("weakform.json", json{{"coarse", fwd_max[0]}, {"fine", fwd_max[1]}, {"ratio", fmt(ratio)}}.dump(2) + "\n");
  ctx.check("weakform_refinement", ratio >= 1.5, ratio, 1.5);
  ctx.check("weakform_reversal", reversal_larger, reversal_larger ? 1.0 : 0.0, 1.0);
}

void run_dualnorm(Ctx& ctx) {
  const auto& c = ctx.c;
  std::vector<Signal> signals;
  if (!c.datum.fixture.empty() || !c.datum.csv.empty()) {
    auto u = load_datum(c, c.seed);
    if (u.grid()->dim() != 1) bad("datum", "dualnorm needs a 1D signal");
    signals.push_back(Signal::from_field(u));
  } else {
    for (auto s : seed_list(c)) signals.push_back(Signal::from_field(load_datum(c, s)));
  }
  if (signals.empty()) bad("count", "no signals");
  std::string text = "case,dual_norm,t,divergence_mass,e_plus,e_minus\n";
  double worst = 0.0;
  std::size_t contacts = 0;
  auto o = c.flow_options();
  o.with_velocity = false;
  for (std::size_t i = 0; i < signals.size(); ++i) {
    const double dn = dual_norm_1d(signals[i], o);
    const double t = dn + 0.01;
    auto s = solve_state(signals[i].field(), t, std::nullopt, o);
    ctx.converged(s.converged);
    worst = std::max(worst, divergence_mass(s));
    contacts += s.e_plus.size() + s.e_minus.size();
    text += csv_line({std::to_string(i), fmt(dn), fmt(t), fmt(divergence_mass(s)), std::to_string(s.e_plus.size()),
                      std::to_string(s.e_minus.size())});
  }
  ctx.write("dualnorm.csv", text);
  ctx.check("extinct_mass", worst <= 1e-6, worst, 1e-6);
  ctx.check("extinct_contacts", contacts == 0, static_cast<double>(contacts), 0.0);
}

void run_oracle_suite(Ctx& ctx) {
  const auto& c = ctx.c;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0), B(0.002, 0.08);
  std::uniform_int_distribution<int> M(1, 9);
  std::vector<ObstacleProblem> problems;
  for (int i = 0; i < c.count; ++i) {
    auto g = Grid::line(0.0, 1.0, M(rng) + 2);
    ObstacleProblem p;
    p.u0 = FaceField(g);
    for (double& x : p.u0.component(0)) x = U(rng);
    p.bound = B(rng);
    p.tol = c.tol;
    p.max_iters = c.max_iters;
    p.omega = c.omega;
    problems.push_back(std::move(p));
  }
  struct Row {
    double diff = 0.0;
    bool labels = false, converged = false;
  };
  std::vector<Row> rows(problems.size());
  parallel_for(problems.size(), c.effective_threads(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto o = brute_force_oracle(problems[i]);
      const auto s = solve_psor(problems[i]);
      rows[i] = {max_abs_diff(o.w, s.w), o.labels == s.labels, s.converged};
    }
  });
  std::string text = "case,interior_nodes,bound,max_diff,labels_equal,converged\n";
  double worst = 0.0;
  std::size_t mismatched = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ctx.converged(rows[i].converged);
    worst = std::max(worst, rows[i].diff);
    if (!rows[i].labels) ++mismatched;
    text += csv_line({std::to_string(i), std::to_string(problems[i].u0.grid()->interior_nodes().size()),
                      fmt(problems[i].bound), fmt(rows[i].diff), rows[i].labels ? "1" : "0",
                      rows[i].converged ? "1" : "0"});
  }
  ctx.write("oracle.csv", text);
  ctx.check("oracle_max_diff", worst <= 1e-10, worst, 1e-10);
  ctx.check("oracle_labels", mismatched == 0, static_cast<double>(mismatched), 0.0);
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConverged: return kNonConverged;
    case ErrorCode::StructureViolation: return kCheckFailed;
    default: return kConfigError;
  }
}

}  // namespace

RunResult run(const RunConfig& c) {
  RunResult r;
  const auto start = std::chrono::steady_clock::now();
  bool can_write = false;
  try {
    validate(c);
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec) bad("out", "cannot create " + c.out.string());
    can_write = true;
    Ctx ctx{c, r, c.out};
    if (c.kind == "flow1d") run_flow(ctx, 1);
    else if (c.kind == "flow2d") run_flow(ctx, 2);
    else if (c.kind == "staircase") run_staircase(ctx);
    else if (c.kind == "compare") run_compare(ctx);
    else if (c.kind == "prox-check") run_prox(ctx);
    else if (c.kind == "heleshaw-radial") run_heleshaw(ctx);
    else if (c.kind == "weakform") run_weakform(ctx);
    else if (c.kind == "dualnorm") run_dualnorm(ctx);
    else if (c.kind == "oracle-suite") run_oracle_suite(ctx);
    if (!r.converged) r.exit_code = kNonConverged;
    else if (std::any_of(r.checks.begin(), r.checks.end(), [](const Check& k) { return !k.pass; })) r.exit_code = kCheckFailed;
  } catch (const Error& e) {
    r.error = e.what();
    r.exit_code = exit_for(e.code());
  } catch (const std::exception& e) {
    r.error = e.what();
    r.exit_code = kCheckFailed;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (can_write) {
    json checks = json::array();
    for (const auto& k : r.checks)
      checks.push_back({{"name", k.name}, {"pass", k.pass}, {"value", fmt(k.value)}, {"limit", fmt(k.limit)}});
    json m = {{"kind", c.kind},
              {"config", json::parse(config_json(c))},
              {"version", DIVFLOW_VERSION},
              {"started_at", timestamp()},
              {"timings", {{"total_s", secs}}},
              {"threads", c.effective_threads()},
              {"checks", checks},
              {"converged", r.converged},
              {"exit_code", r.exit_code},
              {"files", r.files}};
    if (!r.error.empty()) m["error"] = r.error;
    try {
      io::write_text(c.out / "manifest.json", m.dump(2) + "\n");
    } catch (const Error&) {
    }
  }
  return r;
}

}  // namespace divflow::cli
