#pragma once
// Experiment runner behind the divflow command line tool.
//
// A run reads a JSON config, executes one experiment kind, writes its
// artifacts plus manifest.json into the output directory and returns an
// exit status:
//   0 all checks pass, 1 a check failed, 2 config error, 3 non-convergence.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "divflow/flow.hpp"
#include "divflow/heleshaw.hpp"

namespace divflow::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kConfigError = 2, kNonConverged = 3 };

const std::vector<std::string>& kinds();

struct Datum {
  std::string fixture;             ///< built-in fixture name
  std::filesystem::path csv;       ///< two-column (x, value) signal
  std::optional<RadialDatum> radial;
  bool noise = false;              ///< Gaussian random walk on n faces
  double sigma = 1.0;
};

struct RunConfig {
  std::string kind;
  Datum datum;
  int n = 0;                       ///< nodes per axis (faces for noise); 0: kind default
  int dim = 1;                     ///< compare and prox-check
  std::vector<double> times;
  double tol = 0.0;
  long max_iters = 0;
  double omega = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds;
  int count = 0;                   ///< batch size; 0: kind default
  int threads = 0;                 ///< 0: DIVFLOW_THREADS or hardware
  std::filesystem::path out = "divflow-out";

  // staircase
  double t = 0.0;
  bool range_scaled = false;
  int min_run = 3;
  double delta = 0.0;
  std::optional<double> coverage_bar;

  // heleshaw-radial and weakform
  double dt = 0.0;
  double t_end = 0.0;
  double outer_radius = 1.0;
  double max_rel_err = 0.02;

  // prox-check
  std::optional<double> max_gap;

  FlowOptions flow_options() const;
  int effective_threads() const;
};

/// Defaults for a kind (datum, sizes, times) before the file is applied.
RunConfig default_config(const std::string& kind);

/// Reads the JSON text on top of default_config(kind). The "kind" key, when
/// present, must agree with `kind` (or supplies it when `kind` is empty).
/// Throws CONFIG_INVALID naming the offending field.
RunConfig parse_config(const std::string& json_text, const std::string& kind = {});
RunConfig load_config(const std::filesystem::path& path, const std::string& kind = {});

/// Validates times, paths and sizes. Throws CONFIG_INVALID.
void validate(const RunConfig& c);

std::string config_json(const RunConfig& c);

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double limit = 0.0;
};

struct RunResult {
  int exit_code = kPass;
  std::vector<Check> checks;
  std::vector<std::string> files;  ///< relative to out
  std::string error;
  bool converged = true;
};

/// Never throws for config or solver problems; they map to exit codes and
/// are recorded in manifest.json when the output directory is writable.
RunResult run(const RunConfig& c);

/// Names and descriptions of the built-in data, one per line.
std::string fixtures_text();

}  // namespace divflow::cli
