#pragma once

// Bilateral obstacle problem
//
//     min  1/2 |u0 + grad w|^2   over w = 0 off the interior,  |w - c| <= t,
//
// where the norm is the weighted face inner product and c is an optional
// center (zero unless given). Its optimality system at interior node k, with
// r = div(u0 + grad w), is the discrete complementarity problem
//
//     r_k = 0 where |w_k - c_k| < t,   r_k >= 0 where w_k = c_k + t,
//     r_k <= 0 where w_k = c_k - t.
//
// Residuals reported in "w units" are r_k divided by the Laplacian diagonal;
// kkt_residual multiplies the max-norm of the projected (natural) residual by
// Grid::error_scale(), which bounds the max-norm distance to the exact
// minimizer for the unconstrained part of the system.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "divflow/grid.hpp"

namespace divflow {

enum class Contact : std::uint8_t { Free = 0, Lower = 1, Upper = 2 };
enum class SweepOrder { Lexicographic, RedBlack };

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct IterationInfo {
  long iteration = 0;
  double energy = 0.0;
  double residual = 0.0;
};
using IterationObserver = std::function<void(const IterationInfo&)>;

struct ObstacleProblem {
  FaceField u0;
  double bound = 0.0;               ///< t; kUnbounded for the unconstrained problem
  std::optional<NodeField> center;  ///< box is |w - center| <= bound
  double tol = 0.0;                 ///< 0 selects default_tol(grid)
  long max_iters = 0;               ///< 0 selects 200 sweeps per interior node, at least 1000
  double omega = 0.0;               ///< 0 selects default_omega(grid)
  SweepOrder order = SweepOrder::Lexicographic;
  int threads = 1;                  ///< only used by the red-black ordering
};

double default_tol(const Grid& grid);
/// 1.9 in 1D, 1.7 in 2D. Grid::optimal_omega() is usually faster.
double default_omega(const Grid& grid);
double effective_tol(const ObstacleProblem& p);
long effective_max_iters(const ObstacleProblem& p);
double effective_omega(const ObstacleProblem& p);
/// Labels are assigned within this distance of an obstacle (10 * tol).
double contact_tol(const ObstacleProblem& p);

struct ObstacleSolution {
  NodeField w;
  std::vector<Contact> labels;  ///< per node; non-interior nodes are Free
  double kkt_residual = 0.0;
  double energy = 0.0;
  long iterations = 0;
  bool converged = false;
};

struct KktReport {
  /// Per node, density units: |r| at free nodes, the wrong-signed part of r
  /// at contact nodes, 0 off the interior.
  std::vector<double> stationarity;
  double max_stationarity = 0.0;
  /// max over nodes of r+ * (upper - w) + r- * (w - lower), in w units squared.
  double complementarity = 0.0;
  double feasibility = 0.0;
  double natural_residual = 0.0;  ///< max |w - clamp(w + r/diag)|
  double kkt_residual = 0.0;      ///< natural_residual * error_scale

  bool optimal(double tol) const { return kkt_residual <= tol && feasibility <= tol; }
};

/// Projected SOR with a fixed sweep order. NON_CONVERGED is reported through
/// ObstacleSolution::converged, never thrown.
ObstacleSolution solve_psor(const ObstacleProblem& p, const std::optional<NodeField>& warm_start = std::nullopt,
                            const IterationObserver& observer = {});

/// Accelerated projected gradient (restarted FISTA) with step 1 / (sum 4/h^2).
ObstacleSolution solve_projected_gradient(const ObstacleProblem& p, const IterationObserver& observer = {});

/// Exhaustive enumeration of the 3^m contact patterns. Throws TOO_LARGE when
/// the grid has more than 12 interior nodes.
ObstacleSolution brute_force_oracle(const ObstacleProblem& p);

KktReport kkt_report(const ObstacleProblem& p, const NodeField& w);

double obstacle_energy(const FaceField& u0, const NodeField& w);
std::vector<Contact> label_contacts(const ObstacleProblem& p, const NodeField& w);

/// Lower and upper obstacle at every node (0 off the interior).
std::pair<std::vector<double>, std::vector<double>> obstacle_bounds(const ObstacleProblem& p);

}  // namespace divflow
