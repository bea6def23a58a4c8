#include "support.hpp"

#include "cli.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace tlab::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

RunConfig config_for(const std::string& command, const fs::path& scenario, const fs::path& out) {
  RunConfig c;
  c.command = command;
  c.scenario_path = scenario;
  c.out_dir = out;
  c.estimator = test::quick_config();
  return c;
}

fs::path battery_file(const std::string& name) { return test::scenario_dir() / "battery" / name; }

TEST(CliEstimate, WritesAllConstants) {
  const auto out = test::scratch_dir("cli_estimate");
  ASSERT_EQ(cmd_estimate(config_for("estimate", battery_file("02_two_lines_60deg.json"), out)), kOk);
  const auto rows = csv_rows(out / "constants.csv");
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.front(), (std::vector<std::string>{"name", "rho", "value", "samples", "seed", "no_witness"}));
  std::set<std::string> names;
  for (std::size_t i = 1; i < rows.size(); ++i) names.insert(rows[i].at(0));
  EXPECT_EQ(names, (std::set<std::string>{"str", "tr", "itr", "strc", "itr1", "itr2", "itr3", "itrhat1", "itrhat2"}));
  EXPECT_TRUE(fs::exists(out / "report.json"));
  const auto meta = nlohmann::json::parse(slurp(out / "run_metadata.json"));
  EXPECT_EQ(meta.at("command"), "estimate");
}

TEST(CliEstimate, NestedPairFlagsMissingWitness) {
  const auto out = test::scratch_dir("cli_nested");
  ASSERT_EQ(cmd_estimate(config_for("estimate", battery_file("07_nested_point_plane.json"), out)), kOk);
  bool seen = false;
  for (const auto& row : csv_rows(out / "constants.csv")) {
    if (row.at(0) != "itr") continue;
    seen = true;
    EXPECT_EQ(row.back(), "1");
  }
  EXPECT_TRUE(seen);
}

TEST(CliEstimate, RerunIsByteIdentical) {
  const auto a = test::scratch_dir("cli_rerun_a");
  const auto b = test::scratch_dir("cli_rerun_b");
  const auto scenario = battery_file("05_ball_line_crossing.json");
  ASSERT_EQ(cmd_estimate(config_for("estimate", scenario, a)), kOk);
  ASSERT_EQ(cmd_estimate(config_for("estimate", scenario, b)), kOk);
  EXPECT_EQ(slurp(a / "constants.csv"), slurp(b / "constants.csv"));
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
}

TEST(CliEstimate, SeedOverrideChangesSeedColumn) {
  const auto out = test::scratch_dir("cli_seed");
  auto c = config_for("estimate", battery_file("05_ball_line_crossing.json"), out);
  c.seed = 99;
  ASSERT_EQ(cmd_estimate(c), kOk);
  const auto report = nlohmann::json::parse(slurp(out / "report.json"));
  EXPECT_EQ(report.at("seed"), 99);
}

TEST(CliEstimate, MissingFileIsInputError) {
  const auto out = test::scratch_dir("cli_missing");
  EXPECT_EQ(cmd_estimate(config_for("estimate", out / "nope.json", out)), kInputError);
}

TEST(CliAltproj, TwoLinesFirstCycle) {
  const auto out = test::scratch_dir("cli_altproj");
  auto c = config_for("altproj", battery_file("02_two_lines_60deg.json"), out);
  c.x0 = "1,0";
  ASSERT_EQ(cmd_altproj(c), kOk);
  const auto rows = csv_rows(out / "trace.csv");
  ASSERT_GE(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"cycle", "half_step", "x1", "x2", "dist_a", "dist_b", "dist_inter"}));
  const auto& row = rows[3];
  EXPECT_EQ(row[0], "1");
  EXPECT_EQ(row[1], "2");
  EXPECT_NEAR(std::stod(row[2]), 0.25, 1e-12);
  EXPECT_NEAR(std::stod(row[3]), 0.0, 1e-12);
  const auto term = nlohmann::json::parse(slurp(out / "termination.json"));
  EXPECT_EQ(term.at("reason"), "Converged");
  EXPECT_NEAR(term.at("rate").at("rate_per_cycle").get<double>(), 0.25, 1e-6);
}

TEST(CliAltproj, StallReportsPairAndRefusesRate) {
  const auto out = test::scratch_dir("cli_stall");
  auto c = config_for("altproj", battery_file("09_stall_union_axis.json"), out);
  ASSERT_EQ(cmd_altproj(c), kOk);
  const auto term = nlohmann::json::parse(slurp(out / "termination.json"));
  EXPECT_NEAR(term.at("stall").at("gap").get<double>(), 1.0, 1e-9);
  c.fit_rate = true;
  EXPECT_EQ(cmd_altproj(c), kRuntimeError);
}

TEST(CliAltproj, InputErrors) {
  const auto out = test::scratch_dir("cli_altproj_bad");
  auto c = config_for("altproj", battery_file("02_two_lines_60deg.json"), out);
  c.x0 = "1,zero";
  EXPECT_EQ(cmd_altproj(c), kInputError);
  c.x0 = "1,0,0";
  EXPECT_EQ(cmd_altproj(c), kInputError);
}

TEST(CliVerify, ExitCodesFollowOutcome) {
  const auto ok = test::scratch_dir("cli_verify_ok");
  EXPECT_EQ(cmd_verify(config_for("verify", battery_file("04_half_planes_60deg.json"), ok)), kOk);
  EXPECT_TRUE(fs::exists(ok / "verification.json"));
  EXPECT_TRUE(fs::exists(ok / "trace.csv"));

  const auto bad = test::scratch_dir("cli_verify_bad");
  EXPECT_EQ(cmd_verify(config_for("verify", test::scenario_dir() / "negative" / "corrupted_intersection.json", bad)),
            kVerificationFailed);
  const auto doc = nlohmann::json::parse(slurp(bad / "verification.json"));
  EXPECT_FALSE(doc.at("overall").get<bool>());
}

TEST(CliSuite, EmptyDirectoryIsInputError) {
  const auto dir = test::scratch_dir("cli_empty_battery");
  EXPECT_EQ(cmd_suite(config_for("suite", dir, dir / "out")), kInputError);
}

TEST(CliSuite, SummaryCoversBattery) {
  const auto out = test::scratch_dir("cli_suite");
  ASSERT_EQ(cmd_suite(config_for("suite", test::scenario_dir() / "battery", out)), kOk);
  const auto rows = csv_rows(out / "summary.csv");
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0].front(), "scenario");
  EXPECT_EQ(rows[0].back(), "pass");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i].back(), "1") << rows[i].front();
  EXPECT_TRUE(fs::exists(out / "01_two_lines_30deg" / "constants.csv"));
  EXPECT_TRUE(fs::exists(out / "battery_checks.json"));
}

TEST(CliRun, ArgumentErrors) {
  auto call = [](std::vector<std::string> args) {
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run(static_cast<int>(argv.size()), argv.data());
  };
  EXPECT_EQ(call({"tlab"}), kInputError);
  EXPECT_EQ(call({"tlab", "estimate"}), kInputError);
  EXPECT_EQ(call({"tlab", "estimate", "--scenario", "x.json", "--gamma", "1.5"}), kInputError);
  EXPECT_EQ(call({"tlab", "estimate", "--scenario", "x.json", "--steps", "1"}), kInputError);
}

}  // namespace
}  // namespace tlab::cli
