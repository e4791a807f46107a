#pragma once

// Exact gradient flow of D(u) = |div u|(A) through the obstacle problem:
// u(t) = u0 + grad w(t), where w(t) minimizes 1/2 |u0 + grad w|^2 subject to
// |w| <= t. The velocity v = dw/dt is taken as a forward difference quotient.

#include <optional>
#include <span>
#include <vector>

#include "divflow/grid.hpp"
#include "divflow/obstacle.hpp"

namespace divflow {

struct FlowOptions {
  double tol = 0.0;       ///< 0: default_tol(grid)
  long max_iters = 0;
  double omega = 0.0;
  SweepOrder order = SweepOrder::Lexicographic;
  int threads = 1;
  double dt_probe = 0.0;  ///< 0: default_dt_probe(t)
  bool with_velocity = true;
};

double default_dt_probe(double t);
double flow_tol(const Grid& grid, const FlowOptions& opts);

ObstacleProblem make_obstacle_problem(const FaceField& u0, double t, const FlowOptions& opts);

using NodeSet = std::vector<std::size_t>;

struct FlowState {
  double t = 0.0;
  NodeField w;
  FaceField u;
  NodeField v;      ///< empty grid pointer when velocity was not requested
  CellMeasure divu;
  std::vector<Contact> labels;
  NodeSet e_plus, e_minus;    ///< {w = t}, {w = -t}
  NodeSet er_plus, er_minus;  ///< contact sets at t + dt_probe
  double dt_probe = 0.0;
  double kkt_residual = 0.0;
  long iterations = 0;
  bool converged = true;

  bool has_velocity() const { return static_cast<bool>(v.grid()); }
};

struct Trajectory {
  FaceField u0;
  std::vector<FlowState> states;
  double tol = 0.0;

  bool converged() const;
};

/// Solves the obstacle problem at a single time (plus the velocity probe when
/// opts.with_velocity is set).
FlowState solve_state(const FaceField& u0, double t, const std::optional<NodeField>& warm,
                      const FlowOptions& opts = {});

/// Times must be strictly increasing and >= 0. Each state warm-starts from
/// the previous one.
Trajectory evolve(const FaceField& u0, std::span<const double> times, const FlowOptions& opts = {});

NodeField velocity_at(const Trajectory& traj, double t, double dt_probe, const FlowOptions& opts = {});

struct ContactSets {
  NodeSet e_plus, e_minus, er_plus, er_minus;
};
ContactSets contact_sets(const FaceField& u0, const FlowState& state, double dt_probe,
                         const FlowOptions& opts = {});

/// Chain w_n = argmin 1/2|u0 + grad w|^2 with |w - w_{n-1}| <= eps, w_0 = 0,
/// reported as states at t = n * eps.
Trajectory minimizing_movements(const FaceField& u0, double eps, int n_steps, const FlowOptions& opts = {});

/// Unconstrained minimizer w_inf (div(u0 + grad w_inf) = 0) and its max norm.
double extinction_time(const FaceField& u0, const FlowOptions& opts = {});
NodeField unconstrained_potential(const FaceField& u0, const FlowOptions& opts = {});

// Structural checks -------------------------------------------------------

/// Tolerance for nodewise divergence comparisons: 10 * tol, measured in
/// w units (density divided by the Laplacian diagonal).
double divergence_tol(const Grid& grid, double tol);

struct ComparisonReport {
  std::size_t potential_violations = 0;  ///< w' > w + tol
  std::size_t set_violations = 0;        ///< E- not in E'-, or E'+ not in E+
  std::size_t velocity_violations = 0;   ///< v' > v + probe error
  double max_potential_excess = 0.0;
  bool strict_somewhere = false;         ///< w' < w - tol at some node and time
  std::size_t checks = 0;

  bool ok() const { return potential_violations + set_violations + velocity_violations == 0; }
};

/// Requires div u0p <= div u0 at every interior node (PRECONDITION_VIOLATED
/// otherwise).
ComparisonReport compare_flows(const FaceField& u0, const FaceField& u0p, std::span<const double> times,
                               const FlowOptions& opts = {});

struct MonotonicityReport {
  std::size_t positive_violations = 0;
  std::size_t negative_violations = 0;
  std::size_t support_violations = 0;  ///< div u(t) != 0 where div u0 = 0
  double max_excess = 0.0;

  bool ok() const { return positive_violations + negative_violations + support_violations == 0; }
};

/// Compares (div u)^+ and (div u)^- nodewise between u0 and every state and
/// between consecutive states.
MonotonicityReport measure_monotonicity(const Trajectory& traj);

struct StructureReport {
  std::size_t lipschitz_violations = 0;
  std::size_t set_monotonicity_violations = 0;
  std::size_t disjointness_violations = 0;
  std::size_t energy_violations = 0;
  std::size_t mass_violations = 0;
  std::size_t velocity_bound_violations = 0;
  std::size_t contact_velocity_violations = 0;  ///< v != +-1 on E_r+-
  std::size_t kkt_violations = 0;
  double max_velocity = 0.0;

  bool ok() const {
    return lipschitz_violations + set_monotonicity_violations + disjointness_violations + energy_violations +
               mass_violations + velocity_bound_violations + contact_velocity_violations + kkt_violations ==
           0;
  }
};

/// Lipschitz bound, contact-set monotonicity, energy and mass dissipation,
/// |v| <= 1 + velocity_slack, v = +-1 on E_r+-, and the variational
/// inequality of -grad w/t against a fixed probe family.
StructureReport check_structure(const Trajectory& traj, double velocity_slack = 1e-3);

bool is_subset(const NodeSet& a, const NodeSet& b);

}  // namespace divflow
