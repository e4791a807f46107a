#include "divflow/heleshaw.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>

#include "divflow/error.hpp"

namespace divflow {

double RadialDatum::g(double r) const {
  double v = 0.0;
  for (const auto& a : annuli)
    if (r >= a.r_lo && r < a.r_hi) v += a.value;
  return v;
}

RadialDatum RadialDatum::disk(double radius, double value) { return RadialDatum{{{0.0, radius, value}}}; }

double radial_flux(const RadialDatum& d, double r) {
  if (r <= 0.0) return 0.0;
  double m = 0.0;
  for (const auto& a : d.annuli) {
    if (r <= a.r_lo) continue;
    const double top = std::min(r, a.r_hi);
    m += a.value * 0.5 * (top * top - a.r_lo * a.r_lo);
  }
  return m / r;
}

FaceField lift_radial(const RadialDatum& d, const GridPtr& grid) {
  if (!grid || grid->dim() != 2) throw Error(ErrorCode::InvalidArgument, "lift_radial needs a 2D grid");
  return sample_faces(grid, [&](int axis, std::array<double, 2> x) {
    const double r = std::hypot(x[0], x[1]);
    if (r < 1e-14) return 0.0;
    return radial_flux(d, r) * x[axis] / r;
  });
}

FrontTrace radial_oracle(const RadialDatum& d, double outer, std::span<const double> times) {
  namespace odeint = boost::numeric::odeint;
  if (d.annuli.size() != 1 || d.annuli[0].r_lo != 0.0 || !(d.annuli[0].value > 0.0))
    throw Error(ErrorCode::PreconditionViolated, "radial_oracle: needs one positive disk datum g = c on r < R0");
  const double c = d.annuli[0].value;
  const double r0 = d.annuli[0].r_hi;
  if (!(r0 > 0.0 && r0 < outer)) throw Error(ErrorCode::PreconditionViolated, "radial_oracle: need 0 < R0 < outer radius");
  for (std::size_t i = 0; i < times.size(); ++i)
    if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1])))
      throw Error(ErrorCode::InvalidArgument, "radial_oracle: times must be increasing and >= 0");

  FrontTrace tr;
  tr.times.assign(times.begin(), times.end());
  if (times.empty()) return tr;

  using State = std::array<double, 1>;
  const double outer2 = outer * outer;
  auto rhs = [&](const State& s, State& ds, double) {
    ds[0] = s[0] > 0.0 ? -4.0 / (c * std::log(outer2 / s[0])) : 0.0;
  };

  std::vector<double> grid_t;
  if (times.front() > 0.0) grid_t.push_back(0.0);
  grid_t.insert(grid_t.end(), times.begin(), times.end());
  std::vector<double> s_at;
  State s{r0 * r0};
  if (grid_t.size() == 1) {
    s_at.push_back(s[0]);
  } else {
    auto stepper = odeint::make_controlled<odeint::runge_kutta_cash_karp54<State>>(1e-13, 1e-13);
    const double dt0 = std::min(1e-6, 0.01 * (grid_t[1] - grid_t[0]));
    odeint::integrate_times(stepper, rhs, s, grid_t.begin(), grid_t.end(), dt0,
                            [&](const State& x, double) { s_at.push_back(x[0]); });
  }
  if (times.front() > 0.0) s_at.erase(s_at.begin());

  for (std::size_t i = 0; i < times.size(); ++i) {
    const double r = s_at[i] > 1e-18 ? std::sqrt(s_at[i]) : 0.0;
    tr.radius.push_back(r);
    if (r == 0.0 && !tr.vanished) {
      tr.vanished = true;
      tr.vanish_time = times[i];
    }
  }
  return tr;
}

double front_radius(const FlowState& s) {
  const Grid& g = *s.w.grid();
  const double cell = g.h(0) * (g.dim() == 2 ? g.h(1) : 1.0);
  return std::sqrt(static_cast<double>(s.e_plus.size()) * cell / std::numbers::pi);
}

std::vector<FrontRow> compare_front(const Trajectory& traj, const FrontTrace& trace) {
  std::vector<FrontRow> rows;
  for (const auto& s : traj.states) {
    auto it = std::min_element(trace.times.begin(), trace.times.end(),
                               [&](double a, double b) { return std::abs(a - s.t) < std::abs(b - s.t); });
    if (it == trace.times.end() || std::abs(*it - s.t) > 1e-12 * std::max(1.0, s.t))
      throw Error(ErrorCode::InvalidArgument, "compare_front: oracle has no sample at t=" + std::to_string(s.t));
    FrontRow row;
    row.t = s.t;
    row.r_oracle = trace.radius[static_cast<std::size_t>(it - trace.times.begin())];
    row.r_est = front_radius(s);
    const double diff = std::abs(row.r_est - row.r_oracle);
    row.rel_err = row.r_oracle > 0.0 ? diff / row.r_oracle : diff;
    rows.push_back(row);
  }
  return rows;
}

void write_front_csv(const std::filesystem::path& path, const std::vector<FrontRow>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.precision(17);
  out << "t,R_oracle,R_est,rel_err\n";
  for (const auto& r : rows) out << r.t << ',' << r.r_oracle << ',' << r.r_est << ',' << r.rel_err << '\n';
}

double radial_deviation(const NodeField& w) {
  const Grid& g = *w.grid();
  const double h = g.h(0);
  std::map<long, std::pair<double, double>> ring;
  for (std::size_t k : g.interior_nodes()) {
    auto x = g.node_coord(k);
    const long bin = static_cast<long>(std::floor(std::hypot(x[0], x[1]) / h));
    auto [it, fresh] = ring.try_emplace(bin, w[k], w[k]);
    if (!fresh) {
      it->second.first = std::min(it->second.first, w[k]);
      it->second.second = std::max(it->second.second, w[k]);
    }
  }
  double dev = 0.0;
  for (const auto& [bin, mm] : ring) dev = std::max(dev, mm.second - mm.first);
  return dev;
}

double WeakTestFunction::bump(double x, double y) const {
  const double q = 1.0 - ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (rho * rho);
  return q > 0.0 ? q * q * q : 0.0;
}

std::vector<WeakTestFunction> default_weak_family() {
  return {
      {0.0, 0.0, 0.5, 1},    {0.0, 0.0, 0.5, 2},    {0.0, 0.0, 0.5, 3},    {0.3, 0.0, 0.4, 2},
      {-0.3, 0.0, 0.4, 2},   {0.0, 0.3, 0.4, 2},    {0.0, -0.3, 0.4, 2},   {0.25, 0.25, 0.35, 1},
      {-0.25, 0.25, 0.35, 1}, {0.25, -0.25, 0.35, 3}, {-0.25, -0.25, 0.35, 3}, {0.15, 0.1, 0.3, 2},
  };
}

WeakFormReport weak_form_residual(const Trajectory& traj, std::span<const WeakTestFunction> family) {
  WeakFormReport rep;
  const auto& st = traj.states;
  if (st.empty() || !traj.u0.grid()) return rep;
  const GridPtr& grid = traj.u0.grid();
  const std::size_t n = st.size();
  const double dt = st[0].t;
  const double T = st.back().t;
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "weak_form_residual: first sample must be at t = dt > 0");
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(st[i].t - (i + 1) * dt) > 1e-9 * T)
      throw Error(ErrorCode::InvalidArgument, "weak_form_residual: samples must be uniform in time");

  const auto g = divergence(traj.u0);
  std::vector<std::vector<char>> chi(n);
  for (std::size_t i = 0; i < n; ++i) {
    chi[i].assign(grid->node_count(), 0);
    for (std::size_t k : st[i].e_plus) chi[i][k] = 1;
    for (std::size_t k : st[i].e_minus) chi[i][k] = 1;
  }

  for (const auto& tf : family) {
    NodeField b(grid);
    for (std::size_t k : grid->interior_nodes()) {
      auto x = grid->node_coord(k);
      b[k] = tf.bump(x[0], x[1]);
    }
    const FaceField gb = gradient(b);
    const int kpow = tf.power;
    auto p = [&](double t) { return std::pow(1.0 - t / T, kpow); };
    auto dp = [&](double t) { return -kpow / T * std::pow(1.0 - t / T, kpow - 1); };
    auto pint = [&](double a, double c) { return T / (kpow + 1) * (std::pow(1.0 - a / T, kpow + 1) - std::pow(1.0 - c / T, kpow + 1)); };

    double t1 = 0.0;
    std::vector<double> gchi(n, 0.0);
    for (std::size_t k : grid->interior_nodes()) {
      const double m = grid->node_weight(k) * g[k] * b[k];
      t1 += m;
      for (std::size_t i = 0; i < n; ++i)
        if (chi[i][k]) gchi[i] += m;
    }
    t1 *= p(0.0);

    double t2 = 0.0, t3 = 0.0, prev_s = 0.0, prev_f = dp(0.0) * gchi[0];
    for (std::size_t i = 0; i < n; ++i) {
      const double a = i * dt, c = st[i].t;
      const double f = dp(c) * gchi[i];
      t2 += 0.5 * (c - a) * (prev_f + f);
      prev_f = f;
      const double s = inner(gradient(st[i].w), gb);
      t3 += (s - prev_s) / (c - a) * pint(a, c);
      prev_s = s;
    }
    const double r = std::abs(t1 + t2 - t3);
    rep.residuals.push_back(r);
    rep.max_residual = std::max(rep.max_residual, r);
  }
  return rep;
}

Trajectory time_reversed(const Trajectory& traj) {
  Trajectory out = traj;
  const std::size_t n = traj.states.size();
  if (n == 0) return out;
  const NodeField& last = traj.states.back().w;
  for (std::size_t j = 0; j < n; ++j) {
    auto& s = out.states[j];
    const auto& src = traj.states[n - 1 - j];
    s.t = traj.states[j].t;
    s.labels = src.labels;
    s.e_plus = src.e_plus;
    s.e_minus = src.e_minus;
    // w(t_j) = W(T) - W(T - t_j), so the difference quotients run backwards
    NodeField w(last.grid());
    const std::size_t back = n - 1 - j;
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = last[k] - (back == 0 ? 0.0 : traj.states[back - 1].w[k]);
    s.w = w;
    s.u = traj.u0 + gradient(s.w);
    s.divu = divergence(s.u);
  }
  return out;
}

EvoldivReport evoldiv_check(const Trajectory& traj, const CellMeasure& g, double tol) {
  EvoldivReport rep;
  if (!traj.u0.grid()) return rep;
  const Grid& grid = *traj.u0.grid();
  const std::array<std::ptrdiff_t, 2> off{1, static_cast<std::ptrdiff_t>(grid.nodes(0))};
  double gmax = 0.0;
  for (std::size_t k : grid.interior_nodes()) gmax = std::max(gmax, std::abs(g[k]));
  const double zero = 1e-12 * std::max(1.0, gmax);

  for (const auto& s : traj.states) {
    double edge_mass = 0.0;
    auto in_e = [&](std::size_t k) { return grid.is_interior(k) && s.labels[k] != Contact::Free; };
    for (std::size_t k : grid.interior_nodes()) {
      const double r = s.divu[k];
      if (!in_e(k)) {
        rep.max_off_error = std::max(rep.max_off_error, std::abs(r));
        if (std::abs(r) > tol) ++rep.off_violations;
        edge_mass += grid.node_weight(k) * std::abs(r);
        continue;
      }
      edge_mass += grid.node_weight(k) * std::abs(r - g[k]);
      bool core = true;
      for (int a = 0; a < grid.dim() && core; ++a)
        core = in_e(k + off[a]) && in_e(k - off[a]) && s.labels[k + off[a]] == s.labels[k] &&
               s.labels[k - off[a]] == s.labels[k];
      if (core) {
        ++rep.core_nodes;
        const double err = std::abs(r - g[k]);
        rep.max_core_error = std::max(rep.max_core_error, err);
        if (err > tol) ++rep.core_violations;
      } else {
        ++rep.edge_nodes;
        if (std::abs(g[k]) <= zero) {
          if (std::abs(r) > tol) ++rep.bracket_violations;
        } else {
          const double sg = g[k] > 0.0 ? 1.0 : -1.0;
          if (r * sg < -tol || std::abs(r) > std::abs(g[k]) + tol) ++rep.bracket_violations;
        }
      }
    }
    rep.edge_mass = std::max(rep.edge_mass, edge_mass);
  }
  return rep;
}

EvoldivReport evoldiv_check(const Trajectory& traj) {
  return evoldiv_check(traj, divergence(traj.u0), divergence_tol(*traj.u0.grid(), traj.tol));
}

EdgeField::EdgeField(GridPtr g) : grid(std::move(g)) {
  if (!grid) return;
  if (grid->dim() != 2) throw Error(ErrorCode::InvalidArgument, "edge fields need a 2D grid");
  psi1.assign(grid->face_count(1), 0.0);
  psi2.assign(grid->face_count(0), 0.0);
}

FaceField perp(const EdgeField& psi) {
  std::vector<double> y(psi.psi1.size());
  std::transform(psi.psi1.begin(), psi.psi1.end(), y.begin(), [](double a) { return -a; });
  return FaceField(psi.grid, psi.psi2, std::move(y));
}

EdgeField perp(const FaceField& u) {
  EdgeField psi(u.grid());
  auto ux = u.component(0), uy = u.component(1);
  psi.psi1.assign(uy.begin(), uy.end());
  for (std::size_t f = 0; f < ux.size(); ++f) psi.psi2[f] = -ux[f];
  return psi;
}

double norm(const EdgeField& psi) { return norm(perp(psi)); }

CellMeasure rot(const EdgeField& psi) { return divergence(perp(psi)); }

RotTrajectory rot_flow(const EdgeField& psi0, std::span<const double> times, const FlowOptions& opts) {
  RotTrajectory out;
  out.flow = evolve(perp(psi0), times, opts);
  for (const auto& s : out.flow.states) {
    EdgeField p = perp(s.u);
    for (double& x : p.psi1) x = -x;
    for (double& x : p.psi2) x = -x;
    out.psi.push_back(std::move(p));
  }
  return out;
}

}  // namespace divflow
