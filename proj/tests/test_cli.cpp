#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cgramap/bench.hpp"
#include "cgramap/commands.hpp"
#include "cgramap/errors.hpp"
#include "cgramap/scheduling.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace cgramap {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           fmt_name(::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ::unsetenv(kConfigEnvVar);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static std::string fmt_name(const std::string& test) { return "cgramap-cli-" + test; }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string config() const { return testing::data_path("grid2x2.json"); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, MapChain) {
  EXPECT_EQ(cmd_map(testing::data_path("chain3.json"), config(), "", {}, false, out_, err_), kExitOk);
  const auto j = json::parse(out_.str());
  EXPECT_EQ(j["status"], "mapped");
  EXPECT_EQ(j["ii"], 1);
  EXPECT_EQ(j["validation"]["verdict"], "valid");
  EXPECT_FALSE(j["stats"].contains("total_seconds"));
}

TEST_F(Cli, MapRunningExample) {
  EXPECT_EQ(cmd_map(testing::data_path("running_example.json"), config(), path("m.json"), {}, true, out_, err_),
            kExitOk);
  const auto j = json::parse(read_file(path("m.json")));
  EXPECT_EQ(j["ii"], 4);
  EXPECT_EQ(j["mii"], 4);
  EXPECT_TRUE(j["stats"].contains("total_seconds"));
}

TEST_F(Cli, MapLoopDistanceThree) {
  EXPECT_EQ(cmd_map(testing::data_path("loop_distance3.json"), config(), "", {}, false, out_, err_),
            kExitInputError);
  EXPECT_NE(err_.str().find("unsupported loop-carried distance"), std::string::npos);
}

TEST_F(Cli, MapFailureExitsTwo) {
  CliOverrides o;
  o.ii_max = 3;
  EXPECT_EQ(cmd_map(testing::data_path("running_example.json"), config(), "", o, false, out_, err_), kExitFailure);
  EXPECT_EQ(json::parse(out_.str())["failure"], "unsat-at-ii-max");
}

TEST_F(Cli, MissingFileIsInputError) {
  EXPECT_EQ(cmd_map(path("nope.json"), config(), "", {}, false, out_, err_), kExitInputError);
}

TEST_F(Cli, OverridesAndEnvironment) {
  write_file(path("cfg.json"), R"({"rows": 3, "cols": 3, "seed": 5})");
  ::setenv(kConfigEnvVar, path("cfg.json").c_str(), 1);
  auto c = load_run_config("", {});
  EXPECT_EQ(c.cgra.rows, 3);
  EXPECT_EQ(c.seed, 5u);
  CliOverrides o;
  o.rows = 4;
  o.time_policy = "consecutive_only";
  c = load_run_config("", o);
  EXPECT_EQ(c.cgra.rows, 4);
  EXPECT_EQ(c.time_policy, TimePolicy::ConsecutiveOnly);
  ::unsetenv(kConfigEnvVar);
  EXPECT_EQ(load_run_config("", {}), RunConfig{});
  o = {};
  o.time_budget = 0;
  EXPECT_THROW(load_run_config("", o), InputError);
}

TEST_F(Cli, EmitSmt) {
  CliOverrides none;
  EXPECT_EQ(cmd_emit_smt(testing::data_path("chain3.json"), config(), 1, none, out_, err_), kExitOk);
  EXPECT_NE(out_.str().find("(check-sat)"), std::string::npos);
  std::ostringstream bad;
  EXPECT_EQ(cmd_emit_smt(testing::data_path("chain3.json"), config(), 0, none, bad, err_), kExitInputError);
}

TEST_F(Cli, GenIsDeterministic) {
  const RandomDfgParams p{7, 10, 0.3, 2};
  ASSERT_EQ(cmd_gen(p, path("a.json"), out_, err_), kExitOk);
  ASSERT_EQ(cmd_gen(p, path("b.json"), out_, err_), kExitOk);
  EXPECT_EQ(read_file(path("a.json")), read_file(path("b.json")));
  const auto g = parse_dfg(read_file(path("a.json")));
  EXPECT_EQ(g.size(), 10u);
  EXPECT_GE(oracle::rec_ii(g), 2);
  EXPECT_EQ(rec_ii(g), oracle::rec_ii(g));

  std::ostringstream single;
  ASSERT_EQ(cmd_gen({1, 1, 0.0, 0}, "", single, err_), kExitOk);
  const auto one = parse_dfg(single.str());
  EXPECT_EQ(one.size(), 1u);
  EXPECT_TRUE(one.edges().empty());
}

TEST_F(Cli, ValidateRoundTrip) {
  const auto dfg = testing::data_path("running_example.json");
  ASSERT_EQ(cmd_map(dfg, config(), path("m.json"), {}, false, out_, err_), kExitOk);
  std::ostringstream report;
  EXPECT_EQ(cmd_validate(dfg, config(), path("m.json"), "", {}, report, err_), kExitOk);
  EXPECT_EQ(json::parse(report.str())["verdict"], "valid");

  // Move node 0 to a different slot without touching anything else.
  auto j = json::parse(read_file(path("m.json")));
  j["mapping"][0]["slot"] = (j["mapping"][0]["slot"].get<int>() + 1) % 4;
  write_file(path("bad.json"), j.dump());
  std::ostringstream bad;
  EXPECT_EQ(cmd_validate(dfg, config(), path("bad.json"), "", {}, bad, err_), kExitFailure);
  EXPECT_EQ(json::parse(bad.str())["verdict"], "invalid");
}

TEST_F(Cli, BenchEmptySuite) {
  fs::create_directories(path("suite"));
  EXPECT_EQ(cmd_bench(path("suite"), config(), path("r.csv"), {}, err_), kExitOk);
  EXPECT_EQ(read_file(path("r.csv")), std::string(kReportCsvHeader) + "\n");
}

TEST_F(Cli, BenchRowsPerGrid) {
  fs::create_directories(path("suite"));
  fs::copy_file(testing::data_path("chain3.json"), path("suite/a.json"));
  fs::copy_file(testing::data_path("running_example.json"), path("suite/b.json"));
  write_file(path("suite/broken.json"), "{");
  write_file(path("cfg.json"), R"({"grids": [[2, 2], [3, 3]], "budgets": {"time": 60, "space": 60}})");
  EXPECT_EQ(cmd_bench(path("suite"), path("cfg.json"), path("r.csv"), {}, err_), kExitOk);
  const auto rows = parse_report_csv(read_file(path("r.csv")));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].name, "a");
  EXPECT_EQ(rows[0].verdict, "OK");
  EXPECT_EQ(rows[2].name, "b");
  EXPECT_EQ(rows[2].ii, 4);
  EXPECT_EQ(rows[4].name, "broken");
  EXPECT_EQ(rows[4].verdict, "ERR");
  EXPECT_TRUE(fs::exists(path("r_grid.csv")));
  EXPECT_NE(err_.str().find("broken"), std::string::npos);
}

TEST_F(Cli, BenchTimeoutRow) {
  Benchmark b{"chain", testing::chain(3), ""};
  RunConfig c;
  c.time_budget = 0.0;
  const auto row = run_bench_case(b, c, 2, 2);
  EXPECT_EQ(row.verdict, "TO");
  EXPECT_FALSE(row.ii.has_value());
}

TEST(CliBinary, ExitCodes) {
  const std::string exe = CGRAMAP_CLI_PATH;
  auto run = [&](const std::string& args) {
    const int status = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  const auto cfg = testing::data_path("grid2x2.json");
  EXPECT_EQ(run("map " + testing::data_path("chain3.json") + " --config " + cfg), 0);
  EXPECT_EQ(run("map " + testing::data_path("loop_distance3.json") + " --config " + cfg), 1);
  EXPECT_EQ(run("map " + testing::data_path("running_example.json") + " --config " + cfg + " --ii-max 3"), 2);
  EXPECT_EQ(run("frobnicate"), 1);
}

}  // namespace
}  // namespace cgramap
