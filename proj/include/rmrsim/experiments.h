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

// Batch commands behind the rmrsim binary. Each command returns its output
// text and an exit code; failures of configuration, budget or drill
// applicability are thrown and mapped by ExitCodeFor.

#ifndef RMRSIM_EXPERIMENTS_H_
#define RMRSIM_EXPERIMENTS_H_

#include <cstdint>
#include <exception>
#include <string>
#include <vector>

#include "rmrsim/adversary.h"
#include "rmrsim/simulation.h"
#include "rmrsim/types.h"

namespace rmrsim {

inline constexpr int kExitClean = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitOverflow = 3;
inline constexpr int kExitInapplicable = 4;
// Soundness failures and other internal errors.
inline constexpr int kExitInternal = 70;

inline constexpr std::uint64_t kDefaultBudget = 100000;

struct ExperimentConfig {
  // Comma-separated list for sweep.
  std::string algorithm = "cc_flag";
  // dsm, cc, both, or auto (both for run and check; cc for cc_flag and dsm
  // otherwise for adversary and sweep).
  std::string model = "auto";
  int n = 4;
  // Explicit waiter ids win over a count; a negative count means as many as
  // the algorithm allows among the n-1 non-signalers.
  std::vector<ProcId> waiter_ids;
  int waiter_count = -1;
  // rr, random, explicit:P,P,...
  std::string schedule = "random";
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultBudget;
  // Amortized constant; 0 disables the check.
  std::int64_t c = 0;
  std::vector<int> w_list = {8, 16, 32, 64, 128};
  // Polls per waiter (each script stops at the first true); negative means
  // unbounded for run and 3 for check.
  std::int64_t polls = -1;
  std::size_t depth = 30;
  std::uint64_t max_histories = 50'000'000;
  bool mutant = false;
  bool erase = false;
  ProcId globals_home = 1;
  // kNoProc: designated signaler if any, else p1 (run, check) or AUTO
  // (adversary, sweep).
  ProcId signaler = kNoProc;
  // json or csv.
  std::string format = "json";
};

struct CommandResult {
  int exit_code = kExitClean;
  std::string output;
  // JSON lines, one per violation.
  std::vector<std::string> violations;
};

// Builds the scenario described by `config`: the signaler runs Signal once
// (then Polls if it is also a waiter) and waiters Poll, or Wait for blocking
// algorithms.
Scenario BuildScenario(const ExperimentConfig& config, std::int64_t polls);

SchedulePolicy ParseSchedule(const std::string& spec, std::uint64_t seed,
                             std::uint64_t budget);

CommandResult CmdRun(const ExperimentConfig& config);
CommandResult CmdCheck(const ExperimentConfig& config);
CommandResult CmdAdversary(const ExperimentConfig& config);
CommandResult CmdSweep(const ExperimentConfig& config);

// Header line of the sweep CSV.
std::string SweepCsvHeader();

int ExitCodeFor(const std::exception& e);

}  // namespace rmrsim

#endif  // RMRSIM_EXPERIMENTS_H_
