#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "divflow/error.hpp"
#include "divflow/field_io.hpp"
#include "json.hpp"
#include "run.hpp"

using namespace divflow;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / "divflow_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ErrorCode config_error(const std::string& text, std::string* what = nullptr) {
  try {
    auto c = cli::parse_config(text);
    cli::validate(c);
  } catch (const Error& e) {
    if (what) *what = e.what();
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

json manifest(const fs::path& dir) { return json::parse(io::read_text(dir / "manifest.json")); }

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

// small instance of every kind
cli::RunConfig small(const std::string& kind, const fs::path& out) {
  auto c = cli::default_config(kind);
  c.out = out;
  if (kind == "flow1d") c.n = 101;
  if (kind == "flow2d") c.n = 17;
  if (kind == "staircase") {
    c.n = 200;
    c.count = 3;
    c.t = 1e-3;
  }
  if (kind == "compare") {
    c.n = 41;
    c.count = 3;
  }
  if (kind == "prox-check") {
    c.n = 51;
    c.count = 1;
  }
  if (kind == "heleshaw-radial") {
    c.n = 33;
    c.dt = 5e-3;
    c.max_rel_err = 1.0;
  }
  if (kind == "weakform") {
    c.n = 17;
    c.dt = 8e-3;
    c.t_end = 0.04;
  }
  if (kind == "dualnorm") c.count = 2;
  if (kind == "oracle-suite") c.count = 10;
  return c;
}

}  // namespace

TEST(CliConfig, DefaultsPerKind) {
  for (const auto& k : cli::kinds()) {
    auto c = cli::default_config(k);
    EXPECT_EQ(c.kind, k);
    EXPECT_NO_THROW(cli::validate(c)) << k;
  }
  EXPECT_EQ(cli::default_config("flow1d").datum.fixture, "paper-remark-1d");
}

TEST(CliConfig, ParsesAllForms) {
  auto c = cli::parse_config(R"({"kind":"flow2d","datum":{"radial":[{"r_lo":0.4,"r_hi":0.7,"value":1},
      {"r_lo":0,"r_hi":0.3,"value":-1}]},"n":33,"times":[0.01,0.02],"solver":{"tol":1e-9,"omega":1.5,"max_iters":1000},
      "seed":4,"out":"x"})");
  ASSERT_TRUE(c.datum.radial);
  EXPECT_EQ(c.datum.radial->annuli.size(), 2u);
  EXPECT_EQ(c.datum.radial->annuli[0].value, -1.0);
  EXPECT_EQ(c.n, 33);
  EXPECT_EQ(c.tol, 1e-9);
  EXPECT_EQ(c.omega, 1.5);
  EXPECT_EQ(c.max_iters, 1000);
  EXPECT_EQ(c.seed, 4u);
  EXPECT_EQ(c.out, fs::path("x"));
  auto back = cli::parse_config(cli::config_json(c));
  EXPECT_EQ(cli::config_json(back), cli::config_json(c));
}

TEST(CliConfig, EmptyTimesIsConfigInvalid) {
  std::string what;
  EXPECT_EQ(config_error(R"({"kind":"flow1d","times":[]})", &what), ErrorCode::ConfigInvalid);
  EXPECT_NE(what.find("times"), std::string::npos);
}

TEST(CliConfig, ErrorsNameTheField) {
  const std::map<std::string, std::string> cases{
      {R"({"kind":"flow1d","times":[0.05,0.03]})", "times"},
      {R"({"kind":"flow1d","timez":[0.05]})", "timez"},
      {R"({"kind":"flow1d","n":"many"})", "n"},
      {R"({"kind":"flow1d","solver":{"tol":-1}})", "solver.tol"},
      {R"({"kind":"flow1d","solver":{"omega":2.5}})", "solver.omega"},
      {R"({"kind":"flow1d","datum":{"fixture":"nope"}})", "datum.fixture"},
      {R"({"kind":"flow1d","datum":{"csv":"/no/such/file.csv"}})", "datum.csv"},
      {R"({"kind":"flow1d","datum":{"fixture":"step-1d","noise":{}}})", "datum"},
      {R"({"kind":"flow2d","datum":{"radial":[{"r_lo":0,"r_hi":0.5,"value":1},{"r_lo":0.4,"r_hi":0.7,"value":1}]}})",
       "datum.radial"},
      {R"({"kind":"teleport"})", "kind"},
      {R"({"times":[0.1]})", "kind"},
      {R"([1,2])", "config"},
      {R"({"kind":)", "config"},
  };
  for (const auto& [text, field] : cases) {
    std::string what;
    EXPECT_EQ(config_error(text, &what), ErrorCode::ConfigInvalid) << text;
    EXPECT_NE(what.find(field), std::string::npos) << what;
  }
  EXPECT_THROW(cli::parse_config(R"({"kind":"flow1d"})", "flow2d"), Error);
}

TEST(CliConfig, CsvPathIsRelativeToConfig) {
  auto dir = scratch("csvrel");
  io::write_text(dir / "sig.csv", "x,value\n0.25,1\n0.75,0\n");
  io::write_text(dir / "run.json", R"({"kind":"dualnorm","datum":{"csv":"sig.csv"}})");
  auto c = cli::load_config(dir / "run.json");
  EXPECT_EQ(c.datum.csv, dir / "sig.csv");
  c.out = dir / "out";
  auto r = cli::run(c);
  EXPECT_EQ(r.exit_code, cli::kPass) << r.error;
}

TEST(CliConfig, ThreadCapFromEnvironment) {
  setenv("DIVFLOW_THREADS", "1", 1);
  cli::RunConfig c;
  c.threads = 8;
  EXPECT_EQ(c.effective_threads(), 1);
  unsetenv("DIVFLOW_THREADS");
}

TEST(CliRun, RemarkFixtureMatchesClosedForm) {
  auto dir = scratch("remark");
  auto c = cli::default_config("flow1d");
  c.out = dir;
  auto r = cli::run(c);
  EXPECT_EQ(r.exit_code, cli::kPass) << r.error;
  int remark = 0;
  for (const auto& k : r.checks) {
    EXPECT_TRUE(k.pass) << k.name << " " << k.value;
    if (k.name.rfind("remark_", 0) == 0) ++remark;
  }
  EXPECT_EQ(remark, 4);
  auto m = manifest(dir);
  EXPECT_EQ(m["exit_code"], 0);
  EXPECT_TRUE(fs::exists(dir / "state_000.csv"));
  EXPECT_TRUE(fs::exists(dir / "trajectory.json"));
}

TEST(CliRun, OracleSuitePasses) {
  auto dir = scratch("oracle");
  auto c = cli::default_config("oracle-suite");
  c.out = dir;
  auto r = cli::run(c);
  EXPECT_EQ(r.exit_code, cli::kPass) << r.error;
  std::ifstream in(dir / "oracle.csv");
  EXPECT_EQ(std::count(std::istreambuf_iterator<char>(in), {}, '\n'), 201);
}

TEST(CliRun, ExitCodes) {
  auto dir = scratch("codes");
  auto c = small("flow1d", dir / "a");
  c.times.clear();
  EXPECT_EQ(cli::run(c).exit_code, cli::kConfigError);

  c = small("flow1d", dir / "b");
  c.max_iters = 1;
  EXPECT_EQ(cli::run(c).exit_code, cli::kNonConverged);
  EXPECT_EQ(manifest(dir / "b")["exit_code"], 3);

  c = small("staircase", dir / "c");
  c.coverage_bar = 2.0;
  auto r = cli::run(c);
  EXPECT_EQ(r.exit_code, cli::kCheckFailed);
  EXPECT_FALSE(manifest(dir / "c")["checks"].empty());

  c = small("flow2d", dir / "d");
  c.datum.fixture = "step-1d";
  r = cli::run(c);
  EXPECT_EQ(r.exit_code, cli::kConfigError);
  EXPECT_NE(r.error.find("datum"), std::string::npos);
}

TEST(CliRun, EveryKindWritesSchemaColumns) {
  const auto schema = json::parse(io::read_text(fs::path(DIVFLOW_SCHEMA_DIR) / "csv_schema.json"));
  for (const auto& kind : cli::kinds()) {
    auto dir = scratch("kind_" + kind);
    auto r = cli::run(small(kind, dir));
    EXPECT_NE(r.exit_code, cli::kConfigError) << kind << " " << r.error;
    EXPECT_NE(r.exit_code, cli::kNonConverged) << kind;
    EXPECT_FALSE(r.checks.empty()) << kind;
    int csvs = 0;
    for (const auto& f : r.files) {
      if (fs::path(f).extension() != ".csv") continue;
      ++csvs;
      const std::string key = f.rfind("state_", 0) == 0 ? "state_NNN.csv" : f;
      ASSERT_TRUE(schema["files"].contains(key)) << f;
      std::string cols;
      for (const auto& col : schema["files"][key]["columns"]) cols += (cols.empty() ? "" : ",") + col.get<std::string>();
      EXPECT_EQ(first_line(dir / f), cols) << kind << " " << f;
      bool listed = false;
      for (const auto& k : schema["files"][key]["kinds"]) listed |= k == kind;
      EXPECT_TRUE(listed) << kind << " " << f;
    }
    EXPECT_GT(csvs, 0) << kind;
    auto m = manifest(dir);
    EXPECT_EQ(m["kind"], kind);
    EXPECT_TRUE(m.contains("version"));
    EXPECT_TRUE(m["timings"].contains("total_s"));
  }
}

TEST(CliRun, ByteIdenticalCsvForSameSeed) {
  for (const std::string kind : {"flow1d", "staircase", "compare", "oracle-suite"}) {
    auto a = small(kind, scratch("det_a_" + kind)), b = small(kind, scratch("det_b_" + kind));
    a.seed = b.seed = 17;
    b.threads = 1;
    auto ra = cli::run(a), rb = cli::run(b);
    ASSERT_EQ(ra.files, rb.files) << kind;
    for (const auto& f : ra.files)
      EXPECT_EQ(io::read_text(a.out / f), io::read_text(b.out / f)) << kind << " " << f;
  }
}

TEST(CliRun, SeedOverrideChangesOutput) {
  auto a = small("oracle-suite", scratch("seed_a")), b = small("oracle-suite", scratch("seed_b"));
  b.seed = 1;
  cli::run(a);
  cli::run(b);
  EXPECT_NE(io::read_text(a.out / "oracle.csv"), io::read_text(b.out / "oracle.csv"));
  EXPECT_EQ(manifest(b.out)["config"]["seed"], 1);
}

TEST(CliRun, TolOverrideIsUsed) {
  auto c = small("flow1d", scratch("tol"));
  c.tol = 1e-6;
  cli::run(c);
  auto traj = json::parse(io::read_text(c.out / "trajectory.json"));
  EXPECT_EQ(traj["tol"], 1e-6);
}

TEST(CliBinary, ExitStatusAndFixtures) {
  const std::string bin = DIVFLOW_CLI_PATH;
  auto dir = scratch("binary");
  auto status = [&](const std::string& args) {
    const int rc = std::system((bin + " " + args + " > " + (dir / "log.txt").string() + " 2>&1").c_str());
    return WEXITSTATUS(rc);
  };
  EXPECT_EQ(status("fixtures"), 0);
  EXPECT_NE(io::read_text(dir / "log.txt").find("paper-remark-1d"), std::string::npos);
  io::write_text(dir / "empty.json", R"({"kind":"flow1d","times":[]})");
  EXPECT_EQ(status("flow1d --config " + (dir / "empty.json").string() + " --out " + (dir / "e").string()), 2);
  EXPECT_EQ(status("oracle-suite --seed 3 --tol 1e-11 --out " + (dir / "o").string()), 0);
  EXPECT_EQ(manifest(dir / "o")["config"]["solver"]["tol"], 1e-11);
  EXPECT_EQ(status("flow1d --max-iters 1 --out " + (dir / "n").string()), 3);
  EXPECT_EQ(status("nonsense"), 2);
}

TEST(CliConfig, ShippedConfigsAreValid) {
  int seen = 0;
  for (const auto& e : fs::directory_iterator(DIVFLOW_CONFIG_DIR)) {
    if (e.path().extension() != ".json") continue;
    ++seen;
    cli::RunConfig c;
    ASSERT_NO_THROW(c = cli::load_config(e.path())) << e.path();
    EXPECT_NO_THROW(cli::validate(c)) << e.path();
  }
  EXPECT_GE(seen, 5);
}
