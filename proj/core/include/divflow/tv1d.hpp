#pragma once

// One-dimensional specialization: D(u) is the total variation of the signal
// u sampled on the faces of a line grid, and div u = u' lives at nodes.

#include <cstdint>
#include <span>
#include <vector>

#include "divflow/flow.hpp"

namespace divflow {

struct Signal {
  GridPtr grid;
  std::vector<double> samples;  ///< one per face

  static Signal from_field(const FaceField& u);
  FaceField field() const;
  std::size_t size() const { return samples.size(); }
};

/// Signal on n faces of [a, b] (n + 1 nodes).
Signal make_signal(std::vector<double> samples, double a = 0.0, double b = 1.0);

double total_variation(const Signal& s);

struct TvStructure {
  std::size_t contact_mismatch = 0;   ///< faces inside E+- where u(t) != u0
  std::size_t plateau_breaks = 0;     ///< free nodes where u(t) jumps
  std::size_t monotonicity_breaks = 0;
  double max_contact_error = 0.0;
  double max_plateau_jump = 0.0;

  bool ok() const { return contact_mismatch + plateau_breaks + monotonicity_breaks == 0; }
};

/// Checks that u(t) = u0 inside contact runs, u(t) is constant across free
/// nodes, and u0 is nondecreasing on E+ runs and nonincreasing on E- runs.
TvStructure verify_tv_structure(const Signal& u0, const FlowState& state, double tol);

struct TvFlowResult {
  Signal signal;
  FlowState state;
  TvStructure structure;
};

/// Throws STRUCTURE_VIOLATION when verify_tv_structure fails.
TvFlowResult tv_flow(const Signal& u0, double t, const FlowOptions& opts = {});

/// Random walk with independent N(0, sigma^2 h) increments on n faces of
/// [a, b], starting at 0.
Signal make_rough_path(int n, double sigma, std::uint64_t seed, double a = 0.0, double b = 1.0);

struct Run {
  std::size_t start = 0;
  std::size_t length = 0;
  double value = 0.0;
};

struct PlateauReport {
  std::vector<Run> runs;         ///< maximal runs of equal samples
  double plateau_fraction = 0.0; ///< share of samples in runs of length >= min_run
  double window_coverage = 0.0;  ///< share of windows holding >= min_run cells of one run
  int min_run = 3;
  int window = 0;                ///< window width in cells
};

/// Consecutive samples are equal when they differ by at most `equal_tol`.
PlateauReport plateau_report(const Signal& s, double equal_tol, int min_run = 3, double delta = 0.0);

struct StaircaseOptions {
  int min_run = 3;
  double delta = 0.0;        ///< 0: (b - a) / 20
  bool range_scaled = false; ///< t is multiplied by (max - min)^2 of each noisy signal
  int threads = 1;
  FlowOptions flow;
};

struct StaircaseSummary {
  std::vector<std::uint64_t> seeds;
  std::vector<double> times;  ///< effective t per seed
  std::vector<PlateauReport> reports;
  double mean_fraction = 0.0;
  double mean_coverage = 0.0;
  bool converged = true;
};

StaircaseSummary staircase_experiment(const Signal& base, double sigma, double t, std::span<const std::uint64_t> seeds,
                                      const StaircaseOptions& opts = {});

/// Extinction time of the signal viewed as a face field, which in 1D equals
/// max_x |int_a^x (mean(u0) - u0)|.
double dual_norm_1d(const Signal& s, const FlowOptions& opts = {});

}  // namespace divflow
