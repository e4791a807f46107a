#include "divflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "divflow/error.hpp"

namespace divflow {

double default_dt_probe(double t) { return std::max(1e-4, t * 1e-3); }

double flow_tol(const Grid& grid, const FlowOptions& opts) { return opts.tol > 0.0 ? opts.tol : default_tol(grid); }

double divergence_tol(const Grid& grid, double tol) { return 10.0 * tol * grid.laplacian_diagonal(); }

ObstacleProblem make_obstacle_problem(const FaceField& u0, double t, const FlowOptions& opts) {
  ObstacleProblem p;
  p.u0 = u0;
  p.bound = t;
  p.tol = opts.tol;
  p.max_iters = opts.max_iters;
  p.omega = opts.omega;
  p.order = opts.order;
  p.threads = opts.threads;
  return p;
}

bool Trajectory::converged() const {
  return std::all_of(states.begin(), states.end(), [](const FlowState& s) { return s.converged; });
}

namespace {

void split_labels(const std::vector<Contact>& labels, NodeSet& plus, NodeSet& minus) {
  plus.clear();
  minus.clear();
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == Contact::Upper) plus.push_back(k);
    if (labels[k] == Contact::Lower) minus.push_back(k);
  }
}

NodeField quotient(const NodeField& ahead, const NodeField& now, double dt) {
  NodeField v(now.grid());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = (ahead[k] - now[k]) / dt;
  return v;
}

void fill_state(FlowState& s, const FaceField& u0, double t, const ObstacleSolution& sol) {
  s.t = t;
  s.w = sol.w;
  s.u = u0 + gradient(s.w);
  s.divu = divergence(s.u);
  s.labels = sol.labels;
  split_labels(s.labels, s.e_plus, s.e_minus);
  s.kkt_residual = sol.kkt_residual;
  s.iterations = sol.iterations;
  s.converged = sol.converged;
}

double probe_step(double t, const FlowOptions& opts) {
  const double dt = opts.dt_probe > 0.0 ? opts.dt_probe : default_dt_probe(t);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "dt_probe must be > 0");
  return dt;
}

}  // namespace

FlowState solve_state(const FaceField& u0, double t, const std::optional<NodeField>& warm, const FlowOptions& opts) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "flow time must be finite and >= 0");
  FlowState s;
  auto sol = solve_psor(make_obstacle_problem(u0, t, opts), warm);
  fill_state(s, u0, t, sol);
  if (opts.with_velocity) {
    const double dt = probe_step(t, opts);
    auto ahead = solve_psor(make_obstacle_problem(u0, t + dt, opts), sol.w);
    s.dt_probe = dt;
    s.v = quotient(ahead.w, s.w, dt);
    split_labels(ahead.labels, s.er_plus, s.er_minus);
    s.converged = s.converged && ahead.converged;
  }
  return s;
}

Trajectory evolve(const FaceField& u0, std::span<const double> times, const FlowOptions& opts) {
  if (!u0.grid()) throw Error(ErrorCode::InvalidArgument, "evolve: u0 without a grid");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "evolve: times must be >= 0");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "evolve: times must be strictly increasing");
  }
  Trajectory traj;
  traj.u0 = u0;
  traj.tol = flow_tol(*u0.grid(), opts);
  std::optional<NodeField> warm;
  for (double t : times) {
    traj.states.push_back(solve_state(u0, t, warm, opts));
    warm = traj.states.back().w;
  }
  return traj;
}

NodeField velocity_at(const Trajectory& traj, double t, double dt_probe, const FlowOptions& opts) {
  if (!(dt_probe > 0.0)) throw Error(ErrorCode::InvalidArgument, "velocity_at: dt_probe must be > 0");
  std::optional<NodeField> warm;
  for (const auto& s : traj.states)
    if (s.t <= t) warm = s.w;
  auto o = opts;
  o.with_velocity = true;
  o.dt_probe = dt_probe;
  return solve_state(traj.u0, t, warm, o).v;
}

ContactSets contact_sets(const FaceField& u0, const FlowState& state, double dt_probe, const FlowOptions& opts) {
  if (!(dt_probe > 0.0)) throw Error(ErrorCode::InvalidArgument, "contact_sets: dt_probe must be > 0");
  ContactSets cs;
  cs.e_plus = state.e_plus;
  cs.e_minus = state.e_minus;
  auto ahead = solve_psor(make_obstacle_problem(u0, state.t + dt_probe, opts), state.w);
  split_labels(ahead.labels, cs.er_plus, cs.er_minus);
  return cs;
}

Trajectory minimizing_movements(const FaceField& u0, double eps, int n_steps, const FlowOptions& opts) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::InvalidArgument, "minimizing_movements: eps must be > 0");
  if (n_steps < 1) throw Error(ErrorCode::InvalidArgument, "minimizing_movements: n_steps must be >= 1");
  Trajectory traj;
  traj.u0 = u0;
  traj.tol = flow_tol(*u0.grid(), opts);

  const int total = n_steps + (opts.with_velocity ? 1 : 0);
  std::vector<ObstacleSolution> chain;
  NodeField prev(u0.grid());
  for (int n = 1; n <= total; ++n) {
    auto p = make_obstacle_problem(u0, eps, opts);
    p.center = prev;
    chain.push_back(solve_psor(p, prev));
    prev = chain.back().w;
  }

  for (int n = 1; n <= n_steps; ++n) {
    const double t = n * eps;
    const auto& step = chain[n - 1];
    auto p = make_obstacle_problem(u0, t, opts);
    ObstacleSolution sol = step;
    sol.labels = label_contacts(p, step.w);
    FlowState s;
    fill_state(s, u0, t, sol);
    if (opts.with_velocity) {
      const auto& next = chain[n];
      s.dt_probe = eps;
      s.v = quotient(next.w, step.w, eps);
      split_labels(label_contacts(make_obstacle_problem(u0, t + eps, opts), next.w), s.er_plus, s.er_minus);
      s.converged = s.converged && next.converged;
    }
    traj.states.push_back(std::move(s));
  }
  return traj;
}

NodeField unconstrained_potential(const FaceField& u0, const FlowOptions& opts) {
  auto p = make_obstacle_problem(u0, kUnbounded, opts);
  auto sol = solve_psor(p);
  if (!sol.converged) throw Error(ErrorCode::NonConverged, "unconstrained potential did not converge");
  return sol.w;
}

double extinction_time(const FaceField& u0, const FlowOptions& opts) {
  return max_abs(unconstrained_potential(u0, opts));
}

bool is_subset(const NodeSet& a, const NodeSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

ComparisonReport compare_flows(const FaceField& u0, const FaceField& u0p, std::span<const double> times,
                               const FlowOptions& opts) {
  if (!u0.grid() || !u0p.grid() || !u0.grid()->same_shape(*u0p.grid()))
    throw Error(ErrorCode::InvalidArgument, "compare_flows: fields live on different grids");
  const Grid& grid = *u0.grid();
  const auto g = divergence(u0);
  const auto gp = divergence(u0p);
  double scale = 1.0;
  for (std::size_t k : grid.interior_nodes()) scale = std::max(scale, std::abs(g[k]));
  for (std::size_t k : grid.interior_nodes())
    if (gp[k] > g[k] + 1e-12 * scale)
      throw Error(ErrorCode::PreconditionViolated,
                  "compare_flows: div u0p > div u0 at node " + std::to_string(k));

  auto o = opts;
  o.with_velocity = true;
  const auto a = evolve(u0, times, o);
  const auto b = evolve(u0p, times, o);
  const double tol = flow_tol(grid, opts);
  const double ctol = 10.0 * tol;

  ComparisonReport rep;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    const auto& s = a.states[i];
    const auto& sp = b.states[i];
    const double verr = 4.0 * ctol / s.dt_probe;
    for (std::size_t k : grid.interior_nodes()) {
      ++rep.checks;
      const double excess = sp.w[k] - s.w[k];
      rep.max_potential_excess = std::max(rep.max_potential_excess, excess);
      if (excess > tol) ++rep.potential_violations;
      if (excess < -tol) rep.strict_somewhere = true;
      if (sp.v[k] > s.v[k] + verr) ++rep.velocity_violations;
    }
    if (!is_subset(s.e_minus, sp.e_minus)) ++rep.set_violations;
    if (!is_subset(sp.e_plus, s.e_plus)) ++rep.set_violations;
    if (!is_subset(s.er_minus, sp.er_minus)) ++rep.set_violations;
    if (!is_subset(sp.er_plus, s.er_plus)) ++rep.set_violations;
  }
  return rep;
}

MonotonicityReport measure_monotonicity(const Trajectory& traj) {
  MonotonicityReport rep;
  if (!traj.u0.grid()) return rep;
  const Grid& grid = *traj.u0.grid();
  const double dtol = divergence_tol(grid, traj.tol);
  const auto d0 = divergence(traj.u0);
  double gmax = 0.0;
  for (std::size_t k : grid.interior_nodes()) gmax = std::max(gmax, std::abs(d0[k]));
  const double zero = 1e-12 * std::max(1.0, gmax);

  const CellMeasure* prev = &d0;
  for (const auto& s : traj.states) {
    for (std::size_t k : grid.interior_nodes()) {
      const double ep = s.divu.positive_part(k) - prev->positive_part(k);
      const double en = s.divu.negative_part(k) - prev->negative_part(k);
      rep.max_excess = std::max({rep.max_excess, ep, en});
      if (ep > dtol) ++rep.positive_violations;
      if (en > dtol) ++rep.negative_violations;
      if (std::abs(d0[k]) <= zero && std::abs(s.divu[k]) > dtol) ++rep.support_violations;
    }
    prev = &s.divu;
  }
  return rep;
}

namespace {

std::vector<NodeField> probe_family(const GridPtr& grid, const FlowState& s) {
  std::vector<NodeField> fam;
  const Grid& g = *grid;
  auto interior_fill = [&](auto&& f) {
    NodeField phi(grid);
    for (std::size_t k : g.interior_nodes()) phi[k] = f(k);
    return phi;
  };
  fam.push_back(interior_fill([](std::size_t) { return 1.0; }));
  fam.push_back(interior_fill([](std::size_t) { return -1.0; }));
  for (int mode = 1; mode <= 3; ++mode)
    fam.push_back(interior_fill([&](std::size_t k) {
      auto x = g.node_coord(k);
      double val = 1.0;
      for (int a = 0; a < g.dim(); ++a)
        val *= std::sin(mode * std::numbers::pi * (x[a] - g.lo(a)) / (g.hi(a) - g.lo(a)));
      return val;
    }));
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int r = 0; r < 4; ++r) fam.push_back(interior_fill([&](std::size_t) { return uni(rng); }));
  if (s.has_velocity())
    fam.push_back(interior_fill([&](std::size_t k) { return std::clamp(s.v[k], -1.0, 1.0); }));
  if (s.t > 0.0) fam.push_back(interior_fill([&](std::size_t k) { return std::clamp(s.w[k] / s.t, -1.0, 1.0); }));
  return fam;
}

}  // namespace

StructureReport check_structure(const Trajectory& traj, double velocity_slack) {
  StructureReport rep;
  if (!traj.u0.grid()) return rep;
  const GridPtr& grid = traj.u0.grid();
  const double tol = traj.tol;
  const double ctol = 10.0 * tol;
  const double d0 = total_mass(divergence(traj.u0));
  const double energy_slack = 10.0 * tol * (1.0 + d0);
  double area = 0.0;
  for (std::size_t k : grid->interior_nodes()) area += grid->node_weight(k);
  const double mass_slack = divergence_tol(*grid, tol) * area;

  const auto& st = traj.states;
  for (std::size_t i = 0; i < st.size(); ++i) {
    const auto& s = st[i];
    if (max_abs(s.w) > s.t + 2.0 * ctol) ++rep.lipschitz_violations;
    for (std::size_t j = 0; j < i; ++j)
      if (max_abs_diff(s.w, st[j].w) > std::abs(s.t - st[j].t) + 2.0 * ctol) ++rep.lipschitz_violations;

    if (s.t > 0.0) {
      NodeSet both;
      std::set_intersection(s.e_plus.begin(), s.e_plus.end(), s.e_minus.begin(), s.e_minus.end(),
                            std::back_inserter(both));
      if (!both.empty()) ++rep.disjointness_violations;
    }

    const double e_prev = i == 0 ? 0.5 * inner(traj.u0, traj.u0) : 0.5 * inner(st[i - 1].u, st[i - 1].u);
    if (0.5 * inner(s.u, s.u) > e_prev + energy_slack) ++rep.energy_violations;
    const double m_prev = i == 0 ? d0 : total_mass(st[i - 1].divu);
    if (total_mass(s.divu) > m_prev + mass_slack) ++rep.mass_violations;

    if (i > 0 && st[i - 1].t > 0.0) {
      if (!is_subset(s.e_plus, st[i - 1].e_plus)) ++rep.set_monotonicity_violations;
      if (!is_subset(s.e_minus, st[i - 1].e_minus)) ++rep.set_monotonicity_violations;
    }

    if (s.has_velocity()) {
      const double vmax = max_abs(s.v);
      rep.max_velocity = std::max(rep.max_velocity, vmax);
      if (vmax > 1.0 + velocity_slack) ++rep.velocity_bound_violations;
      const double verr = 4.0 * ctol / s.dt_probe;
      for (std::size_t k : s.er_plus)
        if (std::abs(s.v[k] - 1.0) > verr) ++rep.contact_velocity_violations;
      for (std::size_t k : s.er_minus)
        if (std::abs(s.v[k] + 1.0) > verr) ++rep.contact_velocity_violations;
      if (!is_subset(s.er_plus, s.e_plus) || !is_subset(s.er_minus, s.e_minus)) ++rep.set_monotonicity_violations;
    }

    if (s.t > 0.0) {
      const double slack = 2.0 * ctol * (1.0 + d0);
      for (const auto& phi : probe_family(grid, s)) {
        double vi = 0.0;
        for (std::size_t k : grid->interior_nodes()) vi += grid->node_weight(k) * s.divu[k] * (s.w[k] - s.t * phi[k]);
        if (vi < -slack) ++rep.kkt_violations;
      }
    }
  }
  return rep;
}

}  // namespace divflow
