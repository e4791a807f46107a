#include "divflow/tv1d.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "divflow/error.hpp"
#include "divflow/parallel.hpp"

namespace divflow {

Signal Signal::from_field(const FaceField& u) {
  if (!u.grid() || u.grid()->dim() != 1) throw Error(ErrorCode::InvalidArgument, "signals live on 1D grids");
  auto c = u.component(0);
  return Signal{u.grid(), std::vector<double>(c.begin(), c.end())};
}

FaceField Signal::field() const { return FaceField(grid, samples); }

Signal make_signal(std::vector<double> samples, double a, double b) {
  if (samples.size() < 2) throw Error(ErrorCode::InvalidArgument, "a signal needs at least 2 samples");
  auto g = Grid::line(a, b, static_cast<int>(samples.size()) + 1);
  return Signal{g, std::move(samples)};
}

double total_variation(const Signal& s) { return total_mass(divergence(s.field())); }

namespace {

bool in_contact(Contact c) { return c != Contact::Free; }

}  // namespace

TvStructure verify_tv_structure(const Signal& u0, const FlowState& state, double tol) {
  TvStructure rep;
  const Grid& g = *u0.grid;
  const double h = g.h(0);
  const double ctol = 10.0 * tol;
  const double face_tol = 2.0 * ctol / h + 100.0 * tol;
  auto u = state.u.component(0);
  const auto& lab = state.labels;
  const std::size_t n = g.node_count();

  if (state.t == 0.0) {
    // |w| <= 0 pins every node
    for (std::size_t f = 0; f + 1 < n; ++f) {
      const double err = std::abs(u[f] - u0.samples[f]);
      rep.max_contact_error = std::max(rep.max_contact_error, err);
      if (err > face_tol) ++rep.contact_mismatch;
    }
    return rep;
  }

  for (std::size_t f = 0; f + 1 < n; ++f) {
    const std::size_t a = f, b = f + 1;
    if (in_contact(lab[a]) && lab[a] == lab[b]) {
      const double err = std::abs(u[f] - u0.samples[f]);
      rep.max_contact_error = std::max(rep.max_contact_error, err);
      if (err > face_tol) ++rep.contact_mismatch;
    }
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (!g.is_interior(k)) continue;
    const double jump = u[k] - u[k - 1];
    if (lab[k] == Contact::Free) {
      rep.max_plateau_jump = std::max(rep.max_plateau_jump, std::abs(jump));
      if (std::abs(jump) > 100.0 * tol) ++rep.plateau_breaks;
    } else if (lab[k - 1] == lab[k] && lab[k + 1] == lab[k]) {
      const double d0 = u0.samples[k] - u0.samples[k - 1];
      const double slack = 2.0 * face_tol;
      if (lab[k] == Contact::Upper && d0 < -slack) ++rep.monotonicity_breaks;
      if (lab[k] == Contact::Lower && d0 > slack) ++rep.monotonicity_breaks;
    }
  }
  return rep;
}

TvFlowResult tv_flow(const Signal& u0, double t, const FlowOptions& opts) {
  TvFlowResult res;
  res.state = solve_state(u0.field(), t, std::nullopt, opts);
  res.signal = Signal::from_field(res.state.u);
  res.structure = verify_tv_structure(u0, res.state, flow_tol(*u0.grid, opts));
  if (!res.structure.ok())
    throw Error(ErrorCode::StructureViolation,
                "tv_flow: plateau structure violated at t=" + std::to_string(t) + " (" +
                    std::to_string(res.structure.contact_mismatch) + " contact, " +
                    std::to_string(res.structure.plateau_breaks) + " plateau, " +
                    std::to_string(res.structure.monotonicity_breaks) + " monotonicity)");
  return res;
}

Signal make_rough_path(int n, double sigma, std::uint64_t seed, double a, double b) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "make_rough_path: n must be >= 2");
  if (!(sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "make_rough_path: sigma must be >= 0");
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  const double sd = sigma * std::sqrt((b - a) / n);
  if (sd > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> inc(0.0, sd);
    for (std::size_t k = 1; k < x.size(); ++k) x[k] = x[k - 1] + inc(rng);
  }
  return make_signal(std::move(x), a, b);
}

PlateauReport plateau_report(const Signal& s, double equal_tol, int min_run, double delta) {
  PlateauReport rep;
  rep.min_run = min_run;
  const std::size_t n = s.size();
  if (n == 0) return rep;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && std::abs(s.samples[j] - s.samples[j - 1]) <= equal_tol) ++j;
    rep.runs.push_back({i, j - i, s.samples[i]});
    i = j;
  }
  std::size_t covered = 0;
  for (const auto& r : rep.runs)
    if (r.length >= static_cast<std::size_t>(min_run)) covered += r.length;
  rep.plateau_fraction = static_cast<double>(covered) / n;

  const double L = s.grid->hi(0) - s.grid->lo(0);
  if (delta <= 0.0) delta = L / 20.0;
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(delta / s.grid->h(0))), 1, n);
  rep.window = static_cast<int>(w);

  // run index of every sample, then a sliding check of run overlap
  std::vector<std::size_t> run_of(n);
  for (std::size_t r = 0; r < rep.runs.size(); ++r)
    for (std::size_t q = 0; q < rep.runs[r].length; ++q) run_of[rep.runs[r].start + q] = r;
  std::size_t hit = 0;
  const std::size_t windows = n - w + 1;
  for (std::size_t lo = 0; lo < windows; ++lo) {
    const std::size_t hi = lo + w;
    bool found = false;
    for (std::size_t r = run_of[lo]; r < rep.runs.size() && rep.runs[r].start < hi && !found; ++r) {
      const std::size_t a = std::max(lo, rep.runs[r].start);
      const std::size_t b = std::min(hi, rep.runs[r].start + rep.runs[r].length);
      found = b - a >= static_cast<std::size_t>(min_run);
    }
    if (found) ++hit;
  }
  rep.window_coverage = static_cast<double>(hit) / windows;
  return rep;
}

StaircaseSummary staircase_experiment(const Signal& base, double sigma, double t, std::span<const std::uint64_t> seeds,
                                      const StaircaseOptions& opts) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "staircase_experiment: t must be >= 0");
  StaircaseSummary sum;
  sum.seeds.assign(seeds.begin(), seeds.end());
  sum.times.assign(seeds.size(), t);
  sum.reports.resize(seeds.size());
  std::vector<char> conv(seeds.size(), 1);
  const double a = base.grid->lo(0), b = base.grid->hi(0);
  const int n = static_cast<int>(base.size());
  const double eq = 100.0 * flow_tol(*base.grid, opts.flow);

  auto one = [&](std::size_t i) {
    auto noise = make_rough_path(n, sigma, seeds[i], a, b);
    Signal s{base.grid, base.samples};
    for (std::size_t k = 0; k < s.samples.size(); ++k) s.samples[k] += noise.samples[k];
    double te = t;
    if (opts.range_scaled) {
      auto [lo, hi] = std::minmax_element(s.samples.begin(), s.samples.end());
      te = t * (*hi - *lo) * (*hi - *lo);
    }
    sum.times[i] = te;
    auto o = opts.flow;
    o.with_velocity = false;
    auto res = tv_flow(s, te, o);
    conv[i] = res.state.converged;
    sum.reports[i] = plateau_report(res.signal, eq, opts.min_run, opts.delta);
  };
  parallel_for(seeds.size(), std::max(1, opts.threads), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) one(i);
  });

  for (std::size_t i = 0; i < seeds.size(); ++i) {
    sum.mean_fraction += sum.reports[i].plateau_fraction;
    sum.mean_coverage += sum.reports[i].window_coverage;
    sum.converged = sum.converged && conv[i];
  }
  if (!seeds.empty()) {
    sum.mean_fraction /= seeds.size();
    sum.mean_coverage /= seeds.size();
  }
  return sum;
}

double dual_norm_1d(const Signal& s, const FlowOptions& opts) { return extinction_time(s.field(), opts); }

}  // namespace divflow
