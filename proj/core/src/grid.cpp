#include "divflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "divflow/error.hpp"

namespace divflow {

namespace {

void require_shape(const GridPtr& g, int n, const char* what) {
  if (n < 3) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": need at least 3 nodes per axis");
  if (!g) throw Error(ErrorCode::InvalidArgument, what);
}

void require_same(const GridPtr& a, const GridPtr& b) {
  if (!a || !b || (a != b && !a->same_shape(*b)))
    throw Error(ErrorCode::InvalidArgument, "fields live on different grids");
}

}  // namespace

GridPtr Grid::line(double a, double b, int n) {
  if (!(b > a)) throw Error(ErrorCode::InvalidArgument, "Grid::line: empty interval");
  std::shared_ptr<Grid> g(new Grid());
  require_shape(g, n, "Grid::line");
  g->dim_ = 1;
  g->n_ = {n, 1};
  g->lo_ = {a, 0.0};
  g->hi_ = {b, 0.0};
  g->h_ = {(b - a) / (n - 1), 1.0};
  g->finalize();
  return g;
}

GridPtr Grid::rectangle(std::array<double, 2> lo, std::array<double, 2> hi, std::array<int, 2> n) {
  std::shared_ptr<Grid> g(new Grid());
  for (int a = 0; a < 2; ++a) {
    if (!(hi[a] > lo[a])) throw Error(ErrorCode::InvalidArgument, "Grid::rectangle: empty extent");
    require_shape(g, n[a], "Grid::rectangle");
    g->h_[a] = (hi[a] - lo[a]) / (n[a] - 1);
  }
  g->dim_ = 2;
  g->n_ = n;
  g->lo_ = lo;
  g->hi_ = hi;
  g->finalize();
  return g;
}

GridPtr Grid::disk(double radius, int n) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "Grid::disk: radius must be positive");
  std::shared_ptr<Grid> g(new Grid());
  require_shape(g, n, "Grid::disk");
  g->dim_ = 2;
  g->n_ = {n, n};
  g->lo_ = {-radius, -radius};
  g->hi_ = {radius, radius};
  g->h_ = {2.0 * radius / (n - 1), 2.0 * radius / (n - 1)};
  g->disk_radius_ = radius;
  g->finalize();
  return g;
}

void Grid::finalize() {
  interior_mask_.assign(node_count(), 0);
  interior_.clear();
  for (std::size_t k = 0; k < node_count(); ++k) {
    auto [i, j] = node_ij(k);
    bool inside = i > 0 && i < n_[0] - 1;
    if (dim_ == 2) inside = inside && j > 0 && j < n_[1] - 1;
    if (inside && disk_radius_) {
      auto x = node_coord(k);
      inside = std::hypot(x[0], x[1]) < *disk_radius_;
    }
    if (inside) {
      interior_mask_[k] = 1;
      interior_.push_back(k);
    }
  }
}

std::size_t Grid::face_count(int axis) const {
  if (axis >= dim_) return 0;
  if (axis == 0) return static_cast<std::size_t>(n_[0] - 1) * n_[1];
  return static_cast<std::size_t>(n_[0]) * (n_[1] - 1);
}

std::array<double, 2> Grid::node_coord(std::size_t k) const {
  auto [i, j] = node_ij(k);
  return {lo_[0] + i * h_[0], dim_ == 2 ? lo_[1] + j * h_[1] : 0.0};
}

std::array<int, 2> Grid::face_ij(int axis, std::size_t f) const {
  const int stride = axis == 0 ? n_[0] - 1 : n_[0];
  return {static_cast<int>(f % stride), static_cast<int>(f / stride)};
}

std::array<double, 2> Grid::face_center(int axis, std::size_t f) const {
  auto [i, j] = face_ij(axis, f);
  std::array<double, 2> x{lo_[0] + i * h_[0], dim_ == 2 ? lo_[1] + j * h_[1] : 0.0};
  x[axis] += 0.5 * h_[axis];
  return x;
}

std::array<std::size_t, 2> Grid::face_nodes(int axis, std::size_t f) const {
  auto [i, j] = face_ij(axis, f);
  const std::size_t low = node_index(i, j);
  return {low, axis == 0 ? low + 1 : low + n_[0]};
}

double Grid::node_weight(std::size_t k) const {
  auto ij = node_ij(k);
  double wt = 1.0;
  for (int a = 0; a < dim_; ++a) {
    const bool edge = ij[a] == 0 || ij[a] == n_[a] - 1;
    wt *= edge ? 0.5 * h_[a] : h_[a];
  }
  return wt;
}

double Grid::face_weight(int axis, std::size_t f) const {
  auto ij = face_ij(axis, f);
  double wt = h_[axis];
  for (int a = 0; a < dim_; ++a) {
    if (a == axis) continue;
    const bool edge = ij[a] == 0 || ij[a] == n_[a] - 1;
    wt *= edge ? 0.5 * h_[a] : h_[a];
  }
  return wt;
}

double Grid::laplacian_diagonal() const {
  double d = 0.0;
  for (int a = 0; a < dim_; ++a) d += 2.0 / (h_[a] * h_[a]);
  return d;
}

double Grid::laplacian_norm_bound() const { return 2.0 * laplacian_diagonal(); }

double Grid::error_scale() const {
  double len2 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < dim_; ++a) len2 = std::min(len2, (hi_[a] - lo_[a]) * (hi_[a] - lo_[a]));
  return laplacian_diagonal() * len2 / 8.0;
}

double Grid::optimal_omega() const {
  double num = 0.0, den = 0.0;
  for (int a = 0; a < dim_; ++a) {
    const double ih2 = 1.0 / (h_[a] * h_[a]);
    num += ih2 * std::cos(std::numbers::pi / (n_[a] - 1));
    den += ih2;
  }
  const double mu = num / den;
  return 2.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - mu * mu)));
}

bool Grid::same_shape(const Grid& o) const {
  return dim_ == o.dim_ && n_ == o.n_ && lo_ == o.lo_ && hi_ == o.hi_ && disk_radius_ == o.disk_radius_;
}

NodeField::NodeField(GridPtr grid, double fill) : grid_(std::move(grid)) {
  if (!grid_) throw Error(ErrorCode::InvalidArgument, "NodeField: null grid");
  values_.assign(grid_->node_count(), fill);
}

NodeField::NodeField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_ || values_.size() != grid_->node_count())
    throw Error(ErrorCode::InvalidArgument, "NodeField: size does not match grid");
}

FaceField::FaceField(GridPtr grid, double fill) : grid_(std::move(grid)) {
  if (!grid_) throw Error(ErrorCode::InvalidArgument, "FaceField: null grid");
  for (int a = 0; a < 2; ++a) comp_[a].assign(grid_->face_count(a), fill);
}

FaceField::FaceField(GridPtr grid, std::vector<double> x, std::vector<double> y)
    : grid_(std::move(grid)), comp_{std::move(x), std::move(y)} {
  if (!grid_ || comp_[0].size() != grid_->face_count(0) || comp_[1].size() != grid_->face_count(1))
    throw Error(ErrorCode::InvalidArgument, "FaceField: size does not match grid");
}

FaceField& FaceField::operator+=(const FaceField& o) {
  require_same(grid_, o.grid_);
  for (int a = 0; a < 2; ++a)
    for (std::size_t k = 0; k < comp_[a].size(); ++k) comp_[a][k] += o.comp_[a][k];
  return *this;
}

FaceField& FaceField::operator-=(const FaceField& o) {
  require_same(grid_, o.grid_);
  for (int a = 0; a < 2; ++a)
    for (std::size_t k = 0; k < comp_[a].size(); ++k) comp_[a][k] -= o.comp_[a][k];
  return *this;
}

FaceField& FaceField::operator*=(double s) {
  for (auto& c : comp_)
    for (double& x : c) x *= s;
  return *this;
}

FaceField operator+(FaceField a, const FaceField& b) { return a += b; }
FaceField operator-(FaceField a, const FaceField& b) { return a -= b; }
FaceField operator*(double s, FaceField a) { return a *= s; }

CellMeasure::CellMeasure(GridPtr grid, std::vector<double> density)
    : grid_(std::move(grid)), density_(std::move(density)) {
  if (!grid_ || density_.size() != grid_->node_count())
    throw Error(ErrorCode::InvalidArgument, "CellMeasure: size does not match grid");
}

double CellMeasure::weighted(std::size_t k) const { return density_[k] * grid_->node_weight(k); }

std::optional<Sign> CellMeasure::theta(std::size_t k) const {
  if (density_[k] > 0.0) return Sign::Positive;
  if (density_[k] < 0.0) return Sign::Negative;
  return std::nullopt;
}

FaceField gradient(const NodeField& w) {
  const Grid& g = *w.grid();
  FaceField u(w.grid());
  for (int a = 0; a < g.dim(); ++a) {
    auto c = u.component(a);
    const double ih = 1.0 / g.h(a);
    for (std::size_t f = 0; f < c.size(); ++f) {
      auto [lo, hi] = g.face_nodes(a, f);
      c[f] = (w[hi] - w[lo]) * ih;
    }
  }
  return u;
}

CellMeasure divergence(const FaceField& u) {
  const Grid& g = *u.grid();
  std::vector<double> flux(g.node_count(), 0.0);
  for (int a = 0; a < g.dim(); ++a) {
    auto c = u.component(a);
    const double ih = 1.0 / g.h(a);
    for (std::size_t f = 0; f < c.size(); ++f) {
      auto [lo, hi] = g.face_nodes(a, f);
      const double q = g.face_weight(a, f) * c[f] * ih;
      flux[lo] += q;
      flux[hi] -= q;
    }
  }
  // flux[k] is -(d/dw_k) <grad w, u>; interior weights are all equal so this
  // reduces to the usual difference stencil there.
  for (std::size_t k = 0; k < flux.size(); ++k) flux[k] /= g.node_weight(k);
  return CellMeasure(u.grid(), std::move(flux));
}

double total_mass(const CellMeasure& m) {
  const Grid& g = *m.grid();
  double s = 0.0;
  for (std::size_t k : g.interior_nodes()) s += std::abs(m[k]) * g.node_weight(k);
  return s;
}

double inner(const FaceField& a, const FaceField& b) {
  require_same(a.grid(), b.grid());
  const Grid& g = *a.grid();
  double s = 0.0;
  for (int ax = 0; ax < g.dim(); ++ax) {
    auto ca = a.component(ax);
    auto cb = b.component(ax);
    for (std::size_t f = 0; f < ca.size(); ++f) s += g.face_weight(ax, f) * ca[f] * cb[f];
  }
  return s;
}

double inner(const NodeField& a, const NodeField& b) {
  require_same(a.grid(), b.grid());
  const Grid& g = *a.grid();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += g.node_weight(k) * a[k] * b[k];
  return s;
}

double inner(const NodeField& a, const CellMeasure& m) {
  require_same(a.grid(), m.grid());
  const Grid& g = *a.grid();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += g.node_weight(k) * a[k] * m[k];
  return s;
}

double norm(const FaceField& a) { return std::sqrt(inner(a, a)); }

double max_abs(const NodeField& a) {
  double m = 0.0;
  for (double x : a.values()) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(const NodeField& a, const NodeField& b) {
  require_same(a.grid(), b.grid());
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double max_abs_diff(const FaceField& a, const FaceField& b) {
  require_same(a.grid(), b.grid());
  double m = 0.0;
  for (int ax = 0; ax < 2; ++ax) {
    auto ca = a.component(ax);
    auto cb = b.component(ax);
    for (std::size_t f = 0; f < ca.size(); ++f) m = std::max(m, std::abs(ca[f] - cb[f]));
  }
  return m;
}

}  // namespace divflow
