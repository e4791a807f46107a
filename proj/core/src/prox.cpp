#include "divflow/prox.hpp"

#include <algorithm>
#include <cmath>

#include "divflow/error.hpp"

namespace divflow {

namespace {

struct Stencil {
  std::vector<std::size_t> nodes;                 ///< interior nodes
  std::vector<std::array<std::size_t, 4>> faces;  ///< per interior node: x right, x left, y up, y down
  std::array<std::vector<std::array<std::size_t, 2>>, 2> face_nodes;
  std::array<std::vector<double>, 2> face_wt;
  std::array<double, 2> ih{0.0, 0.0};
  int dim = 1;
};

Stencil make_stencil(const Grid& g) {
  Stencil s;
  s.dim = g.dim();
  const std::size_t n0 = static_cast<std::size_t>(g.nodes(0));
  for (std::size_t k : g.interior_nodes()) {
    auto [i, j] = g.node_ij(k);
    const std::size_t xi = static_cast<std::size_t>(j) * (n0 - 1) + i;
    std::array<std::size_t, 4> f{xi, xi - 1, 0, 0};
    if (s.dim == 2) f = {xi, xi - 1, k, k - n0};
    s.nodes.push_back(k);
    s.faces.push_back(f);
  }
  for (int a = 0; a < s.dim; ++a) {
    s.ih[a] = 1.0 / g.h(a);
    for (std::size_t f = 0; f < g.face_count(a); ++f) {
      s.face_nodes[a].push_back(g.face_nodes(a, f));
      s.face_wt[a].push_back(g.face_weight(a, f));
    }
  }
  return s;
}

}  // namespace

ProxResult prox_pdhg(const FaceField& u0, double t, const ProxOptions& opts) {
  if (!u0.grid()) throw Error(ErrorCode::InvalidArgument, "prox_pdhg: u0 without a grid");
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "prox_pdhg: t must be finite and > 0");
  const Grid& g = *u0.grid();
  const Stencil s = make_stencil(g);
  const double target = opts.target > 0.0 ? opts.target : (g.dim() == 1 ? 1e-7 : 1e-6);
  const long max_iters = opts.max_iters > 0 ? opts.max_iters : 5'000'000;
  const double knorm2 = g.laplacian_norm_bound();
  const double tau = opts.tau > 0.0 ? opts.tau : t / 100.0;
  const double sigma = 1.0 / (tau * knorm2);
  const double a = tau / t;
  const double u0n = std::max(norm(u0), 1e-300);
  const double node_wt = g.dim() == 1 ? g.h(0) : g.h(0) * g.h(1);

  std::array<std::vector<double>, 2> u, ub, uo, u0c;
  for (int d = 0; d < s.dim; ++d) {
    auto c = u0.component(d);
    u0c[d].assign(c.begin(), c.end());
    u[d] = u0c[d];
    ub[d] = u0c[d];
    uo[d] = u0c[d];
  }
  std::vector<double> v(g.node_count(), 0.0);

  auto div_at = [&](const std::array<std::vector<double>, 2>& q, std::size_t m) {
    const auto& f = s.faces[m];
    double d = (q[0][f[0]] - q[0][f[1]]) * s.ih[0];
    if (s.dim == 2) d += (q[1][f[2]] - q[1][f[3]]) * s.ih[1];
    return d;
  };
  auto gap_of = [&]() {
    double gp = 0.0;
    for (std::size_t m = 0; m < s.nodes.size(); ++m) {
      const double d = div_at(u, m);
      gp += node_wt * (std::abs(d) - v[s.nodes[m]] * d);
    }
    double q = 0.0;
    for (int d = 0; d < s.dim; ++d)
      for (std::size_t f = 0; f < u[d].size(); ++f) {
        const auto [lo, hi] = s.face_nodes[d][f];
        const double e = u[d][f] - u0c[d][f] - t * (v[hi] - v[lo]) * s.ih[d];
        q += s.face_wt[d][f] * e * e;
      }
    return gp + q / (2.0 * t);
  };

  ProxResult res;
  res.t = t;
  long it = 0;
  double gap = gap_of();
  double bound = std::sqrt(2.0 * t * std::max(gap, 0.0)) / u0n;
  while (bound > target && it < max_iters) {
    ++it;
    for (std::size_t m = 0; m < s.nodes.size(); ++m) {
      const std::size_t k = s.nodes[m];
      v[k] = std::clamp(v[k] + sigma * div_at(ub, m), -1.0, 1.0);
    }
    for (int d = 0; d < s.dim; ++d) {
      uo[d].swap(u[d]);
      for (std::size_t f = 0; f < u[d].size(); ++f) {
        const auto [lo, hi] = s.face_nodes[d][f];
        const double gv = (v[hi] - v[lo]) * s.ih[d];
        u[d][f] = (uo[d][f] + tau * gv + a * u0c[d][f]) / (1.0 + a);
        ub[d][f] = 2.0 * u[d][f] - uo[d][f];
      }
    }
    if (it % opts.check_every == 0 || it == max_iters) {
      gap = gap_of();
      bound = std::sqrt(2.0 * t * std::max(gap, 0.0)) / u0n;
    }
  }
  res.u = FaceField(u0.grid(), u[0], s.dim == 2 ? u[1] : std::vector<double>{});
  res.v = NodeField(u0.grid(), v);
  res.gap = gap;
  res.error_bound = bound;
  res.iterations = it;
  res.converged = bound <= target;
  return res;
}

ProxCheckReport prox_check(const FaceField& u0, double t, const FlowOptions& flow, const ProxOptions& opts) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidArgument, "prox_check: t must be > 0");
  ProxCheckReport rep;
  double te = t;
  if (std::isinf(t)) {
    te = 2.0 * extinction_time(u0, flow);
    if (te == 0.0) {
      rep.t = 0.0;
      rep.converged = true;
      return rep;
    }
  }
  rep.t = te;

  auto o = flow;
  o.with_velocity = false;
  const auto state = solve_state(u0, te, std::nullopt, o);

  ProxResult pr = prox_pdhg(u0, te, opts);
  if (std::isinf(t)) {
    auto more = opts;
    const double cap = 1e-9 * std::max(1.0, norm(u0));
    while (pr.converged && total_mass(divergence(pr.u)) > cap && more.target > 1e-15) {
      more.target = (more.target > 0.0 ? more.target : pr.error_bound) * 0.01;
      pr = prox_pdhg(u0, te, more);
    }
  }
  rep.divergence_mass = total_mass(divergence(pr.u));
  rep.error_bound = pr.error_bound;
  rep.iterations = pr.iterations;
  rep.relative_gap = norm(pr.u - state.u) / std::max(norm(u0), 1e-300);
  rep.converged = pr.converged && state.converged;
  return rep;
}

}  // namespace divflow
