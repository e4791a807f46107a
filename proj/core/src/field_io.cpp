#include "divflow/field_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "divflow/error.hpp"
#include "json.hpp"

namespace divflow::io {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Io, "malformed number in CSV: '" + s + "'");
  }
}

int to_int(const std::string& s) {
  try {
    return std::stoi(s);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Io, "malformed index in CSV: '" + s + "'");
  }
}

}  // namespace

std::string grid_header_json(const Grid& g) {
  json j;
  j["dim"] = g.dim();
  json lo = json::array(), hi = json::array(), n = json::array();
  for (int a = 0; a < g.dim(); ++a) {
    lo.push_back(g.lo(a));
    hi.push_back(g.hi(a));
    n.push_back(g.nodes(a));
  }
  j["lo"] = lo;
  j["hi"] = hi;
  j["n"] = n;
  if (g.disk_radius()) j["disk_radius"] = *g.disk_radius();
  return j.dump(2);
}

GridPtr grid_from_header_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    const int dim = j.at("dim").get<int>();
    if (j.contains("disk_radius")) return Grid::disk(j["disk_radius"].get<double>(), j.at("n")[0].get<int>());
    if (dim == 1) return Grid::line(j.at("lo")[0], j.at("hi")[0], j.at("n")[0]);
    if (dim == 2)
      return Grid::rectangle({j.at("lo")[0], j.at("lo")[1]}, {j.at("hi")[0], j.at("hi")[1]},
                             {j.at("n")[0], j.at("n")[1]});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Io, std::string("grid header: ") + e.what());
  }
  throw Error(ErrorCode::Io, "grid header: dim must be 1 or 2");
}

void write_node_csv(std::ostream& os, const NodeField& w) {
  const Grid& g = *w.grid();
  os << (g.dim() == 1 ? "i,value\n" : "i,j,value\n");
  os << std::setprecision(17);
  for (std::size_t k = 0; k < w.size(); ++k) {
    auto [i, j] = g.node_ij(k);
    os << i << ',';
    if (g.dim() == 2) os << j << ',';
    os << w[k] << '\n';
  }
}

void write_face_csv(std::ostream& os, const FaceField& u) {
  const Grid& g = *u.grid();
  os << (g.dim() == 1 ? "axis,i,value\n" : "axis,i,j,value\n");
  os << std::setprecision(17);
  for (int a = 0; a < g.dim(); ++a) {
    auto c = u.component(a);
    for (std::size_t f = 0; f < c.size(); ++f) {
      auto [i, j] = g.face_ij(a, f);
      os << a << ',' << i << ',';
      if (g.dim() == 2) os << j << ',';
      os << c[f] << '\n';
    }
  }
}

NodeField read_node_csv(std::istream& is, const GridPtr& grid) {
  NodeField w(grid);
  std::vector<char> seen(w.size(), 0);
  std::string line;
  std::getline(is, line);  // header
  const std::size_t cols = grid->dim() == 1 ? 2 : 3;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != cols) throw Error(ErrorCode::Io, "node CSV: expected " + std::to_string(cols) + " columns");
    const int i = to_int(cells[0]);
    const int j = grid->dim() == 2 ? to_int(cells[1]) : 0;
    if (i < 0 || i >= grid->nodes(0) || j < 0 || j >= grid->nodes(1))
      throw Error(ErrorCode::Io, "node CSV: index out of range");
    const std::size_t k = grid->node_index(i, j);
    w[k] = to_double(cells.back());
    seen[k] = 1;
  }
  for (char s : seen)
    if (!s) throw Error(ErrorCode::Io, "node CSV: missing rows");
  return w;
}

FaceField read_face_csv(std::istream& is, const GridPtr& grid) {
  FaceField u(grid);
  std::string line;
  std::getline(is, line);
  const std::size_t cols = grid->dim() == 1 ? 3 : 4;
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != cols) throw Error(ErrorCode::Io, "face CSV: expected " + std::to_string(cols) + " columns");
    const int a = to_int(cells[0]);
    if (a < 0 || a >= grid->dim()) throw Error(ErrorCode::Io, "face CSV: bad axis");
    const int i = to_int(cells[1]);
    const int j = grid->dim() == 2 ? to_int(cells[2]) : 0;
    const int stride = a == 0 ? grid->nodes(0) - 1 : grid->nodes(0);
    const std::size_t f = static_cast<std::size_t>(j) * stride + i;
    if (i < 0 || i >= stride || f >= grid->face_count(a)) throw Error(ErrorCode::Io, "face CSV: index out of range");
    u.component(a)[f] = to_double(cells.back());
    ++rows;
  }
  if (rows != grid->face_count(0) + grid->face_count(1)) throw Error(ErrorCode::Io, "face CSV: row count mismatch");
  return u;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

void save(const std::filesystem::path& stem, const NodeField& w) {
  write_text(stem.string() + ".json", grid_header_json(*w.grid()));
  std::ostringstream os;
  write_node_csv(os, w);
  write_text(stem.string() + ".csv", os.str());
}

void save(const std::filesystem::path& stem, const FaceField& u) {
  write_text(stem.string() + ".json", grid_header_json(*u.grid()));
  std::ostringstream os;
  write_face_csv(os, u);
  write_text(stem.string() + ".csv", os.str());
}

NodeField load_node_field(const std::filesystem::path& stem) {
  auto grid = grid_from_header_json(read_text(stem.string() + ".json"));
  std::istringstream is(read_text(stem.string() + ".csv"));
  return read_node_csv(is, grid);
}

FaceField load_face_field(const std::filesystem::path& stem) {
  auto grid = grid_from_header_json(read_text(stem.string() + ".json"));
  std::istringstream is(read_text(stem.string() + ".csv"));
  return read_face_csv(is, grid);
}

}  // namespace divflow::io
