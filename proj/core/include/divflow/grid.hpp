#pragma once

// Uniform staggered grids in one and two dimensions.
//
// Scalars (w, v, test functions, the divergence measure) live at nodes and
// vector fields live on faces: the face between nodes i and i+1 along an axis
// carries that axis' component. The discrete gradient is the forward
// difference and the discrete divergence is its exact negative adjoint under
// trapezoidal node and face weights.

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace divflow {

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

class Grid {
 public:
  static GridPtr line(double a, double b, int n);
  static GridPtr rectangle(std::array<double, 2> lo, std::array<double, 2> hi,
                           std::array<int, 2> n);
  /// Square [-R,R]^2 with n nodes per axis; nodes with |x| >= R are pinned
  /// to zero like rectangle boundary nodes, so the effective domain is the disk.
  static GridPtr disk(double radius, int n);

  int dim() const { return dim_; }
  int nodes(int axis) const { return n_[axis]; }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  double h(int axis) const { return h_[axis]; }
  std::optional<double> disk_radius() const { return disk_radius_; }

  std::size_t node_count() const { return static_cast<std::size_t>(n_[0]) * n_[1]; }
  std::size_t face_count(int axis) const;

  std::size_t node_index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * n_[0] + i;
  }
  std::array<int, 2> node_ij(std::size_t k) const {
    return {static_cast<int>(k % n_[0]), static_cast<int>(k / n_[0])};
  }
  std::array<double, 2> node_coord(std::size_t k) const;

  std::array<int, 2> face_ij(int axis, std::size_t f) const;
  std::array<double, 2> face_center(int axis, std::size_t f) const;
  /// Nodes on the low and high side of a face.
  std::array<std::size_t, 2> face_nodes(int axis, std::size_t f) const;

  /// Unknown of the Dirichlet problem (not on the rectangle boundary, inside
  /// the disk when one is set).
  bool is_interior(std::size_t k) const { return interior_mask_[k] != 0; }
  std::span<const std::size_t> interior_nodes() const { return interior_; }

  double node_weight(std::size_t k) const;
  double face_weight(int axis, std::size_t f) const;

  /// Diagonal of the 5-point (3-point in 1D) Dirichlet Laplacian, sum of 2/h^2.
  double laplacian_diagonal() const;
  /// Upper bound of sum over axes of 4/h^2 on the Laplacian's spectrum.
  double laplacian_norm_bound() const;
  /// diag * max-norm of the inverse Laplacian (bounded by min_axis L^2/8):
  /// converts a Jacobi-scaled residual into a max-norm error bound.
  double error_scale() const;
  /// Optimal SOR factor for the Dirichlet Laplacian on this grid.
  double optimal_omega() const;

  bool same_shape(const Grid& other) const;

 private:
  Grid() = default;
  void finalize();

  int dim_ = 1;
  std::array<int, 2> n_{1, 1};
  std::array<double, 2> lo_{0.0, 0.0};
  std::array<double, 2> hi_{0.0, 0.0};
  std::array<double, 2> h_{1.0, 1.0};
  std::optional<double> disk_radius_;
  std::vector<char> interior_mask_;
  std::vector<std::size_t> interior_;
};

class NodeField {
 public:
  NodeField() = default;
  explicit NodeField(GridPtr grid, double fill = 0.0);
  NodeField(GridPtr grid, std::vector<double> values);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

class FaceField {
 public:
  FaceField() = default;
  explicit FaceField(GridPtr grid, double fill = 0.0);
  FaceField(GridPtr grid, std::vector<double> x, std::vector<double> y = {});

  const GridPtr& grid() const { return grid_; }
  std::span<double> component(int axis) { return comp_[axis]; }
  std::span<const double> component(int axis) const { return comp_[axis]; }

  FaceField& operator+=(const FaceField& o);
  FaceField& operator-=(const FaceField& o);
  FaceField& operator*=(double s);

 private:
  GridPtr grid_;
  std::array<std::vector<double>, 2> comp_;
};

FaceField operator+(FaceField a, const FaceField& b);
FaceField operator-(FaceField a, const FaceField& b);
FaceField operator*(double s, FaceField a);

enum class Sign { Negative = -1, Positive = 1 };

/// Signed measure represented by its density per node. The value at a node
/// times node_weight is the mass carried by that node's control volume.
class CellMeasure {
 public:
  CellMeasure() = default;
  CellMeasure(GridPtr grid, std::vector<double> density);

  const GridPtr& grid() const { return grid_; }
  std::span<const double> values() const { return density_; }
  double operator[](std::size_t k) const { return density_[k]; }
  double weighted(std::size_t k) const;
  double positive_part(std::size_t k) const { return density_[k] > 0.0 ? density_[k] : 0.0; }
  double negative_part(std::size_t k) const { return density_[k] < 0.0 ? -density_[k] : 0.0; }
  /// Sign density; empty where the measure carries no mass.
  std::optional<Sign> theta(std::size_t k) const;

 private:
  GridPtr grid_;
  std::vector<double> density_;
};

FaceField gradient(const NodeField& w);
/// Negative adjoint of gradient for all node fields. Entries at non-interior
/// nodes carry the flux through the boundary of their control volume.
CellMeasure divergence(const FaceField& u);
/// Mass of |div u| over the open domain (interior nodes only).
double total_mass(const CellMeasure& m);

double inner(const FaceField& a, const FaceField& b);
double inner(const NodeField& a, const NodeField& b);
double inner(const NodeField& a, const CellMeasure& m);
double norm(const FaceField& a);
double max_abs(const NodeField& a);
double max_abs_diff(const NodeField& a, const NodeField& b);
double max_abs_diff(const FaceField& a, const FaceField& b);

/// Samples f at face centers, component by component.
template <class F>
FaceField sample_faces(const GridPtr& grid, F&& f) {
  FaceField u(grid);
  for (int axis = 0; axis < grid->dim(); ++axis) {
    auto c = u.component(axis);
    for (std::size_t k = 0; k < c.size(); ++k) {
      auto x = grid->face_center(axis, k);
      c[k] = f(axis, x);
    }
  }
  return u;
}

template <class F>
NodeField sample_nodes(const GridPtr& grid, F&& f) {
  NodeField w(grid);
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = f(grid->node_coord(k));
  return w;
}

}  // namespace divflow
