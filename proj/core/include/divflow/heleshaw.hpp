#pragma once

// Two-dimensional checks for data with a bounded divergence: the contact
// set law div u(t) = div u0 on E(t), the weak free boundary equation, a
// radial front oracle and the rotation variant of the flow.

#include <filesystem>
#include <span>
#include <vector>

#include "divflow/flow.hpp"

namespace divflow {

struct Annulus {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double value = 0.0;
};

/// Piecewise constant radial divergence profile.
struct RadialDatum {
  std::vector<Annulus> annuli;

  double g(double r) const;
  static RadialDatum disk(double radius, double value);
};

/// f(r) = (1/r) int_0^r g(s) s ds, the radial component of the lifted field.
double radial_flux(const RadialDatum& d, double r);

/// u0(x) = f(|x|) x/|x| sampled on faces (zero at the origin).
FaceField lift_radial(const RadialDatum& d, const GridPtr& grid);

struct FrontTrace {
  std::vector<double> times;
  std::vector<double> radius;
  bool vanished = false;       ///< the front reached r = 0 within the horizon
  double vanish_time = 0.0;    ///< first sampled time with radius 0 (if vanished)
};

/// Front of g = c on r < R0 in the disk of radius outer with v = 0 on its
/// boundary: dR/dt = -1 / (c R log(outer / R)). Integrated in S = R^2 with an
/// adaptive Cash-Karp Runge-Kutta scheme. Requires a single annulus starting
/// at r = 0 with a positive value.
FrontTrace radial_oracle(const RadialDatum& d, double outer, std::span<const double> times);

/// Radius of the disk with the area of E+ (node count times cell area).
double front_radius(const FlowState& s);

struct FrontRow {
  double t = 0.0;
  double r_oracle = 0.0;
  double r_est = 0.0;
  double rel_err = 0.0;
};
std::vector<FrontRow> compare_front(const Trajectory& traj, const FrontTrace& trace);
void write_front_csv(const std::filesystem::path& path, const std::vector<FrontRow>& rows);

/// Max over rings of width h of (max w - min w) on the ring.
double radial_deviation(const NodeField& w);

struct WeakTestFunction {
  double cx = 0.0, cy = 0.0;
  double rho = 0.5;
  int power = 2;  ///< time factor (1 - t/T)^power

  double bump(double x, double y) const;
};

/// Twelve fixed bumps spread over [-0.6, 0.6]^2 with radii 0.3 to 0.5.
std::vector<WeakTestFunction> default_weak_family();

struct WeakFormReport {
  std::vector<double> residuals;  ///< per test function
  double max_residual = 0.0;
};

/// Residual of the weak free boundary equation
///   int g phi(0) + int int g chi_E d_t phi - int int grad v . grad phi = 0
/// on a trajectory sampled at t_i = i dt (i = 1..N), T = t_N. The velocity
/// is the difference quotient of w between samples (w(0) = 0) and the
/// chi_E term uses the trapezoid rule with E(0) taken as E(t_1).
WeakFormReport weak_form_residual(const Trajectory& traj, std::span<const WeakTestFunction> family);

/// Contact sets in reverse order on the same time grid, with w rebuilt so
/// that its difference quotients are the reversed velocities.
Trajectory time_reversed(const Trajectory& traj);

struct EvoldivReport {
  std::size_t core_violations = 0;     ///< E nodes with full stencil in E: |div u - div u0| > tol
  std::size_t bracket_violations = 0;  ///< E edge nodes: div u / div u0 outside [0, 1]
  std::size_t off_violations = 0;      ///< nodes off E: |div u| > tol
  double max_core_error = 0.0;
  double max_off_error = 0.0;
  double edge_mass = 0.0;              ///< L1 mass of div u - div u0 chi_E
  std::size_t core_nodes = 0, edge_nodes = 0;

  bool ok() const { return core_violations + bracket_violations + off_violations == 0; }
};

/// tol is in density units.
EvoldivReport evoldiv_check(const Trajectory& traj, const CellMeasure& divu0, double tol);
EvoldivReport evoldiv_check(const Trajectory& traj);

/// psi = (psi1, psi2) with psi1 on the y faces and psi2 on the x faces, so
/// that the perpendicular field (psi2, -psi1) is an ordinary face field.
struct EdgeField {
  GridPtr grid;
  std::vector<double> psi1;  ///< on y faces
  std::vector<double> psi2;  ///< on x faces

  explicit EdgeField(GridPtr g = nullptr);
};

FaceField perp(const EdgeField& psi);
EdgeField perp(const FaceField& u);
double norm(const EdgeField& psi);
/// rot psi = d_x psi2 - d_y psi1 = div(perp psi).
CellMeasure rot(const EdgeField& psi);

struct RotTrajectory {
  Trajectory flow;  ///< flow of perp(psi0)
  std::vector<EdgeField> psi;
};

RotTrajectory rot_flow(const EdgeField& psi0, std::span<const double> times, const FlowOptions& opts = {});

}  // namespace divflow
