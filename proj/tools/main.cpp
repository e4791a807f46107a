#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "divflow/error.hpp"
#include "run.hpp"

using namespace divflow;

int main(int argc, char** argv) {
  CLI::App app{"divflow: gradient flow of the total divergence"};
  app.require_subcommand(1);

  std::string config;
  std::optional<double> tol, omega;
  std::optional<long> max_iters;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> threads;
  bool quiet = false;

  app.add_subcommand("fixtures", "list built-in initial data");
  for (const auto& kind : cli::kinds()) {
    auto* sub = app.add_subcommand(kind, "run the " + kind + " experiment");
    sub->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--tol", tol, "solver tolerance");
    sub->add_option("--max-iters", max_iters, "solver iteration cap");
    sub->add_option("--omega", omega, "relaxation factor in (0, 2)");
    sub->add_option("--seed", seed, "base seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--threads", threads, "thread count (capped by DIVFLOW_THREADS)");
    sub->add_flag("-q,--quiet", quiet, "only print the status line");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kConfigError;
  }

  auto* sub = app.get_subcommands().front();
  if (sub->get_name() == "fixtures") {
    std::cout << cli::fixtures_text();
    return 0;
  }

  cli::RunConfig c;
  try {
    c = config.empty() ? cli::default_config(sub->get_name()) : cli::load_config(config, sub->get_name());
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return cli::kConfigError;
  }
  if (tol) c.tol = *tol;
  if (max_iters) c.max_iters = *max_iters;
  if (omega) c.omega = *omega;
  if (seed) c.seed = *seed;
  if (out) c.out = *out;
  if (threads) c.threads = *threads;

  const auto r = cli::run(c);
  if (!quiet)
    for (const auto& k : r.checks)
      std::printf("%-34s %s  value=%.6g limit=%.6g\n", k.name.c_str(), k.pass ? "PASS" : "FAIL", k.value, k.limit);
  if (!r.error.empty()) std::cerr << r.error << "\n";
  static const char* status[] = {"pass", "check failure", "config error", "non-convergence"};
  std::printf("%s: %s (exit %d), artifacts in %s\n", c.kind.c_str(), status[r.exit_code], r.exit_code,
              c.out.string().c_str());
  return r.exit_code;
}
