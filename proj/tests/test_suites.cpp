#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "lcqft/cli_io.hpp"
#include "lcqft/errors.hpp"
#include "lcqft/suites.hpp"

using namespace lcqft;
using namespace lcqft::suites;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no lcqft::Error thrown";
  return ErrorCode::InvalidArgument;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("lcqft_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Report sample_report() {
  Report r;
  r.seed = 42;
  SuiteReport a{"alpha", {}, 12.5};
  a.checks.push_back({"ok", 3, Status::Pass, 1.25e-14, 1e-12});
  a.checks.push_back({"nan_metric", 0, Status::Fail, std::numeric_limits<double>::quiet_NaN(), 0.0});
  a.checks.push_back({"inf_metric", 5, Status::Inconclusive, std::numeric_limits<double>::infinity(), 1e-3});
  SuiteReport b{"beta", {{"neg", 7, Status::Pass, -0.1, 0.5}}, 0.0};
  r.suites = {a, b};
  return r;
}

}  // namespace

TEST(Config, SectionsCommentsAndFallback) {
  const auto c = Config::parse("seed = 9  # trailing\n; comment\n[all]\nx = 1\n[car]\nx = 2\ny = 3.5\n[general]\nz = q\n");
  EXPECT_EQ(c.seed(), 9u);
  EXPECT_EQ(c.get_int("car", "x", 0), 2);
  EXPECT_EQ(c.get_int("spin", "x", 0), 1);
  EXPECT_DOUBLE_EQ(c.get_double("car", "y", 0.0), 3.5);
  EXPECT_EQ(c.get("", "z", ""), "q");
  EXPECT_EQ(c.get_int("spin", "missing", 17), 17);
  EXPECT_EQ(Config{}.seed(), kDefaultSeed);
}

TEST(Config, ParseErrorsCarryLineNumbers) {
  auto message = [](const std::string& text) {
    try {
      Config::parse(text, "cfg.ini");
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ConfigParse);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("seed = 1\nnot a pair\n").find("cfg.ini:2"), std::string::npos);
  EXPECT_NE(message("\n\n[bogus]\n").find("cfg.ini:3"), std::string::npos);
  EXPECT_NE(message("[car]\nx = 1\nx = 2\n").find("cfg.ini:3"), std::string::npos);
  EXPECT_NE(message("seed =\n").find("cfg.ini:1"), std::string::npos);
  EXPECT_NE(message("# c\nseed = abc\n").find("cfg.ini:2"), std::string::npos);
  EXPECT_NE(message("[car\n").find("cfg.ini:1"), std::string::npos);

  const auto c = Config::parse("[car]\n\nx = 1.5e\n", "n.ini");
  try {
    c.get_double("car", "x", 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigParse);
    EXPECT_NE(std::string(e.what()).find("n.ini:3"), std::string::npos);
  }
  EXPECT_EQ(code_of([&] { c.get_int("car", "x", 0); }), ErrorCode::ConfigParse);
}

TEST(Config, PathPrecedence) {
  const auto a = temp_path("a.ini"), b = temp_path("b.ini");
  std::ofstream(a) << "seed = 11\n";
  std::ofstream(b) << "seed = 22\n";
  unsetenv(kConfigEnv);
  EXPECT_EQ(resolve_config("").seed(), kDefaultSeed);
  setenv(kConfigEnv, b.c_str(), 1);
  EXPECT_EQ(resolve_config("").seed(), 22u);
  EXPECT_EQ(resolve_config(a).seed(), 11u);
  setenv(kConfigEnv, temp_path("missing.ini").c_str(), 1);
  EXPECT_EQ(code_of([] { resolve_config(""); }), ErrorCode::IoError);
  unsetenv(kConfigEnv);
}

TEST(Report, JsonRoundTripIncludingNonFinite) {
  const Report r = sample_report();
  const auto text = to_json(r);
  EXPECT_NE(text.find("\"schema\": \"lcqft-report/1\""), std::string::npos);
  EXPECT_NE(text.find("\"metric\": null"), std::string::npos);
  EXPECT_NE(text.find("\"metric\": \"inf\""), std::string::npos);
  EXPECT_EQ(from_json(text), r);
  EXPECT_TRUE(r.failed());
  EXPECT_EQ(exit_code(r), 1);
}

TEST(Report, NoTimingZeroesWallTime) {
  const auto back = from_json(to_json(sample_report(), {false}));
  for (const auto& s : back.suites) EXPECT_EQ(s.wall_time_ms, 0.0);
}

TEST(Report, CsvHasOneRowPerCheck) {
  const auto csv = to_csv(sample_report());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "suite,check,criterion,status,metric,tolerance,wall_time_ms");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6) << line;
  }
  EXPECT_EQ(rows, 4);
}

TEST(Report, FromJsonRejectsMalformedInput) {
  EXPECT_EQ(code_of([] { from_json("{"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { from_json(R"({"seed": 1})"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { from_json(R"({"seed": 1, "suites": [{"suite": "a", "wall_time_ms": 0, "checks": [
    {"name": "x", "criterion": 1, "status": "maybe", "metric": 0, "tolerance": 0}]}]})"); }),
            ErrorCode::InvalidArgument);
}

TEST(Report, ExportErrors) {
  const Report r = sample_report();
  EXPECT_EQ(code_of([&] { export_report(r, "xml", temp_path("r.xml")); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { export_report(r, "json", "/nonexistent_dir/r.json"); }), ErrorCode::IoError);
  const auto p = temp_path("r.json");
  export_report(r, "json", p);
  EXPECT_EQ(from_json(slurp(p)), r);
}

TEST(Suites, RegistryAndUnknownSuite) {
  const auto names = suite_names();
  EXPECT_EQ(names.size(), 11u);
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
  EXPECT_EQ(code_of([] { run_suites("nope", Config{}); }), ErrorCode::UnknownSuite);
  EXPECT_EQ(code_of([] { run_suite("all", Config{}); }), ErrorCode::UnknownSuite);
}

TEST(Suites, FixedSeedIsByteStable) {
  for (const std::string name : {"car", "geometry", "lattice-kg"}) {
    Config c;
    c.set_seed(123);
    const auto a = run_suites(name, c), b = run_suites(name, c);
    EXPECT_EQ(to_json(a, {false}), to_json(b, {false})) << name;
    EXPECT_EQ(to_csv(a, {false}), to_csv(b, {false})) << name;
    EXPECT_FALSE(a.failed()) << to_json(a, {false});
    EXPECT_EQ(a.seed, 123u);
  }
}

TEST(Suites, InjectedToleranceFailsTheRun) {
  auto c = Config::parse("[car]\ntol.psi_norm = -1\n");
  const auto r = run_suites("car", c);
  ASSERT_EQ(r.suites.size(), 1u);
  bool seen = false;
  for (const auto& chk : r.suites[0].checks)
    if (chk.name == "psi_norm") {
      seen = true;
      EXPECT_EQ(chk.status, Status::Fail);
      EXPECT_EQ(chk.tolerance, -1.0);
    } else {
      EXPECT_EQ(chk.status, Status::Pass) << chk.name;
    }
  EXPECT_TRUE(seen);
  EXPECT_EQ(exit_code(r), 1);
}

TEST(Suites, IllPosedParametersAreConfigErrors) {
  EXPECT_EQ(code_of([] { run_suites("lattice-kg", Config::parse("[lattice-kg]\ndt = 0.2\n")); }),
            ErrorCode::ConfigParse);
  EXPECT_EQ(code_of([] { run_suites("lattice-kg", Config::parse("[lattice-kg]\nnx = ten\n")); }),
            ErrorCode::ConfigParse);
  EXPECT_EQ(code_of([] { run_suites("geometry", Config::parse("[geometry]\nmetric = torus\n")); }),
            ErrorCode::ConfigParse);
}

TEST(Suites, DifferentSeedsGiveDifferentMetrics) {
  Config a, b;
  a.set_seed(1);
  b.set_seed(2);
  EXPECT_NE(to_csv(run_suites("car", a), {false}), to_csv(run_suites("car", b), {false}));
}

TEST(CliIo, ConeInputForms) {
  const auto bare = cli::parse_cone_input(R"([{"x": [0,0,0,0], "xi": [1,1,0,0]}, {"x": [1,0,0,0], "xi": [-1,-1,0,0]}])");
  EXPECT_EQ(bare.size(), 2u);
  const auto obj = cli::parse_cone_input(
      R"({"order": "vertex", "points": [{"x": [0,0,0,0], "xi": [1,0,0,0]}, {"x": [0,0,0,0], "xi": [-1,0,0,0]}]})");
  EXPECT_EQ(obj.size(), 2u);
  EXPECT_EQ(code_of([] { cli::parse_cone_input("[]"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { cli::parse_cone_input("not json"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { cli::parse_cone_input(R"([{"x": [0,0,0], "xi": [1,0,0,0]}])"); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { cli::parse_cone_input(R"({"order": "diag", "points": []})"); }), ErrorCode::InvalidArgument);
}

TEST(CliIo, ConeVerdictUsesOneBasedVertices) {
  const auto cfg = cli::parse_cone_input(R"([{"x": [0,0,0,0], "xi": [1,0,0,0]}, {"x": [0,0,0,0], "xi": [-1,0,0,0]}])");
  const auto v = cones::in_gamma_n(cfg);
  ASSERT_TRUE(v.member);
  const auto text = cli::cone_verdict_json(cfg, v);
  EXPECT_NE(text.find("\"member\": true"), std::string::npos);
  EXPECT_EQ(text.find("\"i\": 0"), std::string::npos);
}

TEST(CliIo, ScenarioFiles) {
  const auto std16 = cli::parse_scenario(R"({"standard": 16, "max_halvings": 8})");
  EXPECT_EQ(std16.max_halvings, 8);
  EXPECT_FALSE(std16.scenario.K2.empty());

  const auto custom = cli::parse_scenario(R"({
    "grid": {"nt": 24, "nx": 24, "dt": 0.5, "dx": 1.0},
    "slab": [8, 12],
    "g2": {"beta": 1.0, "h": 1.0, "bumps": [{"field": "h", "row": 10, "col": 12, "radius": 4, "amplitude": 0.5}]},
    "K1": {"rows": [20, 21], "cols": [11, 12]},
    "K2": {"rows": [2, 2], "cols": [2, 21]}})");
  EXPECT_EQ(custom.scenario.spec.g1.nt, 24);
  EXPECT_EQ(custom.scenario.K1.count(), 4);
  EXPECT_EQ(code_of([] { cli::parse_scenario(R"({"grid": {"nt": 4}})"); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] {
              cli::parse_scenario(R"({"grid": {"nt": 8, "nx": 8}, "slab": [2, 4],
                "K1": {"rows": [0, 9], "cols": [0, 1]}, "K2": null})");
            }),
            ErrorCode::InvalidArgument);
}

TEST(CliIo, ReadAndWriteFiles) {
  EXPECT_EQ(code_of([] { cli::read_file(temp_path("does_not_exist")); }), ErrorCode::IoError);
  const auto p = temp_path("w.txt");
  cli::write_output(p, "abc\n");
  EXPECT_EQ(cli::read_file(p), "abc\n");
  EXPECT_EQ(code_of([] { cli::write_output("/nonexistent_dir/x", "1"); }), ErrorCode::IoError);
}
