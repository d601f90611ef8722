// Copyright 2026 The rmrsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rmrsim/experiments.h"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"

namespace rmrsim {
namespace {

using Json = nlohmann::json;

TEST(CmdRunTest, CcFlagTotalsWithinBound) {
  ExperimentConfig c;
  c.algorithm = "cc_flag";
  c.n = 4;
  c.seed = 7;
  CommandResult r = CmdRun(c);
  EXPECT_EQ(r.exit_code, kExitClean);
  Json j = Json::parse(r.output);
  EXPECT_LE(j["totals"]["rmr_cc"].get<int>(), 2 * 4 + 1);
  EXPECT_EQ(j["k"], 4);
  EXPECT_EQ(j["per_process"].size(), 4u);
  EXPECT_TRUE(j["violations"].empty());
}

TEST(CmdRunTest, ModelFiltersMetrics) {
  ExperimentConfig c;
  c.model = "dsm";
  Json j = Json::parse(CmdRun(c).output);
  EXPECT_TRUE(j["totals"].contains("rmr_dsm"));
  EXPECT_FALSE(j["totals"].contains("rmr_cc"));
  EXPECT_FALSE(j["totals"].contains("msg_dir"));
}

TEST(CmdRunTest, RecordsAreByteIdentical) {
  ExperimentConfig c;
  c.algorithm = "dsm_queue";
  c.n = 8;
  c.seed = 42;
  EXPECT_EQ(CmdRun(c).output, CmdRun(c).output);
}

TEST(CmdRunTest, SecondWaiterIsAUsageError) {
  ExperimentConfig c;
  c.algorithm = "dsm_single_waiter";
  c.n = 3;
  c.waiter_count = 2;
  try {
    CmdRun(c);
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_EQ(ExitCodeFor(e), kExitUsage);
  }
}

TEST(CmdRunTest, MutantViolationExitsOne) {
  ExperimentConfig c;
  c.algorithm = "dsm_single_waiter";
  c.n = 2;
  c.mutant = true;
  c.polls = 3;
  c.schedule = "explicit:2,2,1,1,1,2,2";
  CommandResult r = CmdRun(c);
  EXPECT_EQ(r.exit_code, kExitViolation);
  ASSERT_FALSE(r.violations.empty());
  EXPECT_EQ(Json::parse(r.violations[0])["kind"], "POLL_FALSE_AFTER_SIGNAL");
}

TEST(CmdRunTest, AmortizedBudgetIsChecked) {
  ExperimentConfig c;
  c.algorithm = "dsm_fixed_waiters";
  c.n = 6;
  c.model = "dsm";
  c.c = 3;
  c.schedule = "explicit:1,1,1,1,1";
  CommandResult r = CmdRun(c);
  EXPECT_EQ(r.exit_code, kExitViolation);
  EXPECT_EQ(Json::parse(r.violations.at(0))["kind"], "AMORTIZED_BUDGET");
}

TEST(CmdCheckTest, CleanAndMutant) {
  ExperimentConfig c;
  c.algorithm = "cc_flag";
  c.n = 3;
  c.depth = 20;
  CommandResult clean = CmdCheck(c);
  EXPECT_EQ(clean.exit_code, kExitClean);
  EXPECT_EQ(Json::parse(clean.output)["violations"], 0);

  c.algorithm = "dsm_single_waiter";
  c.mutant = true;
  CommandResult bad = CmdCheck(c);
  EXPECT_EQ(bad.exit_code, kExitViolation);
  EXPECT_GT(Json::parse(bad.output)["violations"].get<int>(), 0);
}

TEST(CmdCheckTest, Guards) {
  ExperimentConfig c;
  c.n = 5;
  EXPECT_THROW(CmdCheck(c), ConfigError);
  c.n = 3;
  c.algorithm = "dsm_queue";
  c.max_histories = 10;
  try {
    CmdCheck(c);
    FAIL();
  } catch (const StateSpaceOverflow& e) {
    EXPECT_EQ(ExitCodeFor(e), kExitOverflow);
    EXPECT_EQ(e.explored(), 10u);
  }
}

TEST(CmdSweepTest, CsvIsSortedWithFixedColumns) {
  ExperimentConfig c;
  c.algorithm = "dsm_registration,cc_flag,dsm_queue";
  c.w_list = {16, 8};
  c.format = "csv";
  CommandResult r = CmdSweep(c);
  EXPECT_EQ(r.exit_code, kExitClean);
  std::istringstream in(r.output);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0],
            "algorithm,model,W,k,signaler_rmrs,total_rmr_dsm,total_rmr_cc,"
            "msg_bus,msg_dir,ratio");
  EXPECT_EQ(lines[1].rfind("cc_flag,cc,8,", 0), 0u);
  EXPECT_EQ(lines[2].rfind("cc_flag,cc,16,", 0), 0u);
  EXPECT_EQ(lines[3].rfind("dsm_queue,dsm,8,8,17,", 0), 0u);
  EXPECT_EQ(lines[6].rfind("dsm_registration,dsm,16,17,16,", 0), 0u);
}

TEST(CmdSweepTest, JsonRowsAreReports) {
  ExperimentConfig c;
  c.algorithm = "dsm_fixed_waiters";
  c.w_list = {8};
  Json j = Json::parse(CmdSweep(c).output);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["signaler_rmrs"], 7);
}

TEST(CmdAdversaryTest, InapplicableDrill) {
  ExperimentConfig c;
  c.algorithm = "cc_flag";
  c.model = "dsm";
  c.w_list = {8};
  try {
    CmdAdversary(c);
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_EQ(ExitCodeFor(e), kExitInapplicable);
  }
}

TEST(ParseScheduleTest, Forms) {
  EXPECT_EQ(ParseSchedule("rr", 0, 9).kind, PolicyKind::kRoundRobin);
  SchedulePolicy r = ParseSchedule("random", 5, 9);
  EXPECT_EQ(r.seed, 5u);
  EXPECT_EQ(r.budget, 9u);
  SchedulePolicy e = ParseSchedule("explicit:1,2,1", 0, 9);
  EXPECT_EQ(e.sequence, (std::vector<ProcId>{1, 2, 1}));
  EXPECT_THROW(ParseSchedule("fifo", 0, 9), ConfigError);
  EXPECT_THROW(ParseSchedule("explicit:1,x", 0, 9), ConfigError);
}

// Runs the rmrsim binary and returns its exit status.
int Cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " RMRSIM_CLI " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(Cli("run --algo cc_flag --n 4"), 0);
  EXPECT_EQ(Cli("run --algo nope"), 2);
  EXPECT_EQ(Cli("run --bogus"), 2);
  EXPECT_EQ(Cli(""), 2);
  EXPECT_EQ(Cli("run --algo dsm_single_waiter --n 3 --waiters 2"), 2);
  EXPECT_EQ(Cli("check --algo cc_flag --n 5"), 2);
  EXPECT_EQ(Cli("check --algo dsm_single_waiter --n 3 --depth 25 --mutant"),
            1);
  EXPECT_EQ(Cli("check --algo dsm_queue --n 3 --max-histories 10"), 3);
  EXPECT_EQ(Cli("adversary --algo cc_flag --model dsm --W 8"), 4);
  EXPECT_EQ(Cli("adversary --algo dsm_queue --W 8"), 0);
  EXPECT_EQ(Cli("adversary --algo dsm_fixed_waiters --W 128 --erase --c 3"),
            1);
  EXPECT_EQ(Cli("sweep --algo dsm_queue --W 8,16 --format csv"), 0);
}

TEST(CliTest, BudgetFromEnvironmentAndOutFile) {
  const std::string out = ::testing::TempDir() + "rmrsim_run.json";
  ASSERT_EQ(Cli("run --algo cc_flag --n 4 --schedule rr --out " + out,
                "RMRSIM_BUDGET=2"),
            0);
  std::ifstream in(out);
  Json j = Json::parse(in);
  EXPECT_TRUE(j["incomplete"].get<bool>());
  EXPECT_EQ(j["totals"]["steps"], 2);

  ASSERT_EQ(Cli("run --algo cc_flag --n 4 --schedule rr --budget 100 --out " +
                    out,
                "RMRSIM_BUDGET=2"),
            0);
  std::ifstream again(out);
  EXPECT_FALSE(Json::parse(again)["incomplete"].get<bool>());
}

TEST(CliTest, ConfigFileWithFlagOverride) {
  const std::string cfg = ::testing::TempDir() + "rmrsim.toml";
  const std::string out = ::testing::TempDir() + "rmrsim_cfg.json";
  {
    std::ofstream f(cfg);
    f << "[run]\nalgo = \"dsm_queue\"\nn = 5\nseed = 3\n";
  }
  ASSERT_EQ(Cli("run --config " + cfg + " --n 6 --out " + out), 0);
  std::ifstream in(out);
  Json j = Json::parse(in);
  EXPECT_EQ(j["algorithm"], "dsm_queue");
  EXPECT_EQ(j["n"], 6);
  EXPECT_EQ(j["seed"], 3);
}

}  // namespace
}  // namespace rmrsim
