#include "divflow/obstacle.hpp"

#include <cmath>

#include "box_system.hpp"
#include "divflow/error.hpp"
#include "divflow/parallel.hpp"

namespace divflow {

namespace detail {

BoxSystem make_box_system(const ObstacleProblem& p) {
  if (!p.u0.grid()) throw Error(ErrorCode::InvalidArgument, "obstacle problem without a grid");
  if (!(p.bound >= 0.0)) throw Error(ErrorCode::InvalidArgument, "obstacle bound must be >= 0");
  if (p.tol < 0.0 || std::isnan(p.tol)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");
  if (p.center && p.center->size() != p.u0.grid()->node_count())
    throw Error(ErrorCode::InvalidArgument, "obstacle center lives on a different grid");

  BoxSystem s;
  s.grid = p.u0.grid();
  const Grid& grid = *s.grid;
  s.dim = grid.dim();
  s.offset = {1, static_cast<std::ptrdiff_t>(grid.nodes(0))};
  for (int a = 0; a < s.dim; ++a) s.inv_h2[a] = 1.0 / (grid.h(a) * grid.h(a));
  s.diag = grid.laplacian_diagonal();

  auto div = divergence(p.u0);
  s.g.assign(div.values().begin(), div.values().end());
  s.lo.assign(grid.node_count(), 0.0);
  s.hi.assign(grid.node_count(), 0.0);
  for (std::size_t k : grid.interior_nodes()) {
    const double c = p.center ? (*p.center)[k] : 0.0;
    s.lo[k] = c - p.bound;
    s.hi[k] = c + p.bound;
  }
  return s;
}

double BoxSystem::natural_residual(const std::vector<double>& w) const {
  double m = 0.0;
  for (std::size_t k : grid->interior_nodes()) {
    const double step = clamp(w[k] + residual(w, k) / diag, k) - w[k];
    m = std::max(m, std::abs(step));
  }
  return m;
}

double energy(const FaceField& u0, const std::vector<double>& w) {
  const Grid& g = *u0.grid();
  double e = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    auto c = u0.component(a);
    const double ih = 1.0 / g.h(a);
    for (std::size_t f = 0; f < c.size(); ++f) {
      auto [lo, hi] = g.face_nodes(a, f);
      const double v = c[f] + (w[hi] - w[lo]) * ih;
      e += g.face_weight(a, f) * v * v;
    }
  }
  return 0.5 * e;
}

ObstacleSolution finish(const ObstacleProblem& p, std::vector<double> w, long iterations, bool converged) {
  ObstacleSolution sol;
  sol.w = NodeField(p.u0.grid(), std::move(w));
  sol.labels = label_contacts(p, sol.w);
  sol.energy = obstacle_energy(p.u0, sol.w);
  sol.iterations = iterations;
  sol.converged = converged;
  return sol;
}

}  // namespace detail

double default_tol(const Grid& grid) { return grid.dim() == 1 ? 1e-10 : 1e-8; }

double effective_tol(const ObstacleProblem& p) { return p.tol > 0.0 ? p.tol : default_tol(*p.u0.grid()); }

long effective_max_iters(const ObstacleProblem& p) {
  if (p.max_iters > 0) return p.max_iters;
  return std::max<long>(1000, 200 * static_cast<long>(p.u0.grid()->interior_nodes().size()));
}

double default_omega(const Grid& grid) { return grid.dim() == 1 ? 1.9 : 1.7; }

double effective_omega(const ObstacleProblem& p) {
  const double w = p.omega > 0.0 ? p.omega : default_omega(*p.u0.grid());
  if (!(w > 0.0 && w < 2.0)) throw Error(ErrorCode::InvalidArgument, "relaxation factor must lie in (0, 2)");
  return w;
}

double contact_tol(const ObstacleProblem& p) { return 10.0 * effective_tol(p); }

std::pair<std::vector<double>, std::vector<double>> obstacle_bounds(const ObstacleProblem& p) {
  auto s = detail::make_box_system(p);
  return {std::move(s.lo), std::move(s.hi)};
}

std::vector<Contact> label_contacts(const ObstacleProblem& p, const NodeField& w) {
  const Grid& g = *p.u0.grid();
  std::vector<Contact> labels(g.node_count(), Contact::Free);
  if (p.bound == 0.0 || std::isinf(p.bound)) return labels;
  const double ctol = contact_tol(p);
  for (std::size_t k : g.interior_nodes()) {
    const double c = p.center ? (*p.center)[k] : 0.0;
    const double du = c + p.bound - w[k];
    const double dl = w[k] - (c - p.bound);
    if (du <= ctol && du <= dl)
      labels[k] = Contact::Upper;
    else if (dl <= ctol)
      labels[k] = Contact::Lower;
  }
  return labels;
}

double obstacle_energy(const FaceField& u0, const NodeField& w) {
  return detail::energy(u0, std::vector<double>(w.values().begin(), w.values().end()));
}

namespace {

std::vector<double> initial_iterate(const detail::BoxSystem& s, const std::optional<NodeField>& warm) {
  std::vector<double> w(s.grid->node_count(), 0.0);
  for (std::size_t k : s.grid->interior_nodes()) w[k] = s.clamp(warm ? (*warm)[k] : 0.0, k);
  return w;
}

ObstacleSolution degenerate_zero(const ObstacleProblem& p) {
  return detail::finish(p, std::vector<double>(p.u0.grid()->node_count(), 0.0), 0, true);
}

}  // namespace

ObstacleSolution solve_psor(const ObstacleProblem& p, const std::optional<NodeField>& warm_start,
                            const IterationObserver& observer) {
  auto s = detail::make_box_system(p);
  if (warm_start && warm_start->size() != s.grid->node_count())
    throw Error(ErrorCode::InvalidArgument, "warm start lives on a different grid");
  if (p.bound == 0.0 && !p.center) return degenerate_zero(p);

  const double tol = effective_tol(p);
  const long max_iters = effective_max_iters(p);
  const double omega = effective_omega(p);
  const double scale = s.grid->error_scale();
  const double step = omega / s.diag;

  std::vector<double> w = initial_iterate(s, warm_start);
  const auto interior = s.grid->interior_nodes();
  const std::size_t m = interior.size();
  if (m == 0) return detail::finish(p, std::move(w), 0, true);

  std::array<std::vector<std::size_t>, 2> colors;
  if (p.order == SweepOrder::RedBlack) {
    for (std::size_t k : interior) {
      auto [i, j] = s.grid->node_ij(k);
      colors[(i + j) % 2].push_back(k);
    }
  }

  auto relax = [&](std::size_t k) { w[k] = s.clamp(w[k] + step * s.residual(w, k), k); };

  const long check_every = observer || m <= 256 ? 1 : 4;
  long it = 0;
  bool converged = false;
  double res = s.natural_residual(w) * scale;
  if (res <= tol) converged = true;
  while (!converged && it < max_iters) {
    ++it;
    if (p.order == SweepOrder::Lexicographic) {
      for (std::size_t k : interior) relax(k);
    } else {
      for (const auto& color : colors)
        parallel_for(color.size(), p.threads, [&](std::size_t lo, std::size_t hi) {
          for (std::size_t q = lo; q < hi; ++q) relax(color[q]);
        });
    }
    if (it % check_every == 0 || it == max_iters) {
      res = s.natural_residual(w) * scale;
      if (observer) observer({it, detail::energy(p.u0, w), res});
      converged = res <= tol;
    }
  }

  auto sol = detail::finish(p, std::move(w), it, converged);
  sol.kkt_residual = res;
  return sol;
}

ObstacleSolution solve_projected_gradient(const ObstacleProblem& p, const IterationObserver& observer) {
  auto s = detail::make_box_system(p);
  if (p.bound == 0.0 && !p.center) return degenerate_zero(p);

  const double tol = effective_tol(p);
  const long max_iters = effective_max_iters(p);
  const double scale = s.grid->error_scale();
  const double tau = 1.0 / s.grid->laplacian_norm_bound();
  const auto interior = s.grid->interior_nodes();

  std::vector<double> x = initial_iterate(s, std::nullopt);
  std::vector<double> y = x, next = x;
  double theta = 1.0;
  long it = 0;
  double res = s.natural_residual(x) * scale;
  bool converged = res <= tol;
  while (!converged && it < max_iters) {
    ++it;
    for (std::size_t k : interior) next[k] = s.clamp(y[k] + tau * s.residual(y, k), k);

    // gradient restart test
    double dir = 0.0;
    for (std::size_t k : interior) dir += (y[k] - next[k]) * (next[k] - x[k]);
    if (dir > 0.0) {
      theta = 1.0;
      y = next;
    } else {
      const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
      const double beta = (theta - 1.0) / theta_next;
      for (std::size_t k : interior) y[k] = next[k] + beta * (next[k] - x[k]);
      theta = theta_next;
    }
    x.swap(next);

    if (it % 4 == 0 || it == max_iters) {
      res = s.natural_residual(x) * scale;
      if (observer) observer({it, detail::energy(p.u0, x), res});
      converged = res <= tol;
    }
  }
  auto sol = detail::finish(p, std::move(x), it, converged);
  sol.kkt_residual = res;
  return sol;
}

KktReport kkt_report(const ObstacleProblem& p, const NodeField& w) {
  auto s = detail::make_box_system(p);
  std::vector<double> x(w.values().begin(), w.values().end());
  const auto labels = label_contacts(p, w);

  KktReport rep;
  rep.stationarity.assign(x.size(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!s.grid->is_interior(k)) {
      rep.feasibility = std::max(rep.feasibility, std::abs(x[k]));
      continue;
    }
    const double r = s.residual(x, k);
    double st = 0.0;
    switch (labels[k]) {
      case Contact::Free: st = std::abs(r); break;
      case Contact::Upper: st = std::max(0.0, -r); break;
      case Contact::Lower: st = std::max(0.0, r); break;
    }
    rep.stationarity[k] = st;
    rep.max_stationarity = std::max(rep.max_stationarity, st);

    const double sr = r / s.diag;
    const double up = std::isinf(s.hi[k]) ? 0.0 : s.hi[k] - x[k];
    const double dn = std::isinf(s.lo[k]) ? 0.0 : x[k] - s.lo[k];
    rep.complementarity = std::max(rep.complementarity, std::max(sr, 0.0) * std::abs(up) + std::max(-sr, 0.0) * std::abs(dn));
    rep.feasibility = std::max({rep.feasibility, x[k] - s.hi[k], s.lo[k] - x[k]});
  }
  rep.natural_residual = s.natural_residual(x);
  rep.kkt_residual = rep.natural_residual * s.grid->error_scale();
  return rep;
}

}  // namespace divflow
