#pragma once

// Independent computation of the proximal map
//   argmin_u D(u) + 1/(2t) |u - u0|^2
// by a primal-dual (Chambolle-Pock) iteration on the saddle form
//   min_u max_{|v| <= 1} <v, div u> + 1/(2t) |u - u0|^2.
// The duality gap certifies the primal iterate: |u - u*| <= sqrt(2 t gap).

#include "divflow/flow.hpp"

namespace divflow {

struct ProxOptions {
  double target = 0.0;   ///< relative certified error; 0: 1e-7 (1D), 1e-6 (2D)
  long max_iters = 0;    ///< 0: 5'000'000
  double tau = 0.0;      ///< primal step; 0: t / 100. sigma = 1 / (tau |div|^2)
  int check_every = 50;
};

struct ProxResult {
  FaceField u;
  NodeField v;
  double gap = 0.0;
  double error_bound = 0.0;  ///< sqrt(2 t gap) / |u0|
  double t = 0.0;            ///< time actually used (finite)
  long iterations = 0;
  bool converged = false;
};

ProxResult prox_pdhg(const FaceField& u0, double t, const ProxOptions& opts = {});

struct ProxCheckReport {
  double relative_gap = 0.0;  ///< |u_prox - u_flow(t)| / |u0|
  double error_bound = 0.0;
  double divergence_mass = 0.0;  ///< D(u_prox)
  double t = 0.0;
  long iterations = 0;
  bool converged = false;        ///< both solvers
};

/// t = kUnbounded is replaced by twice the extinction time, and
/// the primal-dual iteration then also runs until D(u) <= 1e-9 |u0|.
ProxCheckReport prox_check(const FaceField& u0, double t, const FlowOptions& flow = {}, const ProxOptions& opts = {});

}  // namespace divflow
