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

// Two-phase adversary that forces a signaler to pay for every stable waiter.
//
//   1. W waiters Poll in step-level round-robin, one Poll each per round,
//      until the stability oracle reports all of them stable.
//   2. A signaler whose memory module nobody wrote runs Signal solo. With
//      erase-on-discovery, any active waiter the signaler is about to see, or
//      whose module it is about to write, is erased first.
//   3. Every waiter still active must now Poll true; with erase-on-discovery
//      the remaining active waiters are then erased as well.

#ifndef RMRSIM_ADVERSARY_H_
#define RMRSIM_ADVERSARY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rmrsim/cost_model.h"
#include "rmrsim/simulation.h"
#include "rmrsim/types.h"

namespace rmrsim {

// Waiters never all became stable within the round budget.
class NonStabilizing : public DrillInapplicable {
 public:
  using DrillInapplicable::DrillInapplicable;
};

struct DrillConfig {
  std::string algorithm;
  int waiters = 8;
  CostModel model = CostModel::kDsm;
  // kNoProc selects automatically: the algorithm's designated signaler if it
  // has one, else the lowest id whose module was not written.
  ProcId signaler = kNoProc;
  bool erase_on_discovery = false;
  // Processes beyond the waiters (and a designated signaler).
  int extra_procs = 1;
  ProcId globals_home = 1;
  int max_rounds = 64;
  std::uint64_t signal_budget = 1'000'000;
  std::size_t max_configurations = 10'000;
};

struct SeparationReport {
  std::string algorithm;
  CostModel model = CostModel::kDsm;
  int waiters = 0;
  int num_procs = 0;
  // Participants in the final history.
  int k = 0;
  ProcId signaler = kNoProc;
  // RMRs of the Signal call under `model`.
  std::int64_t signaler_rmrs = 0;
  std::int64_t total_rmr_dsm = 0;
  std::int64_t total_rmr_cc = 0;
  std::int64_t msg_bus = 0;
  std::int64_t msg_dir = 0;
  int rounds = 0;
  int erased = 0;
  // Waiters whose post-drill Poll did not return true.
  std::vector<ProcId> stale_waiters;
  // Indexed by process id.
  std::vector<ProcessCounters> per_process;
  History history;

  std::int64_t total_rmr() const {
    return model == CostModel::kDsm ? total_rmr_dsm : total_rmr_cc;
  }
};

SeparationReport AdversarySeparation(const DrillConfig& config);

// {algorithm, model, W, k, signaler_rmrs, total_rmr_dsm, total_rmr_cc,
//  msg_bus, msg_dir}
nlohmann::ordered_json ToJson(const SeparationReport& report);

}  // namespace rmrsim

#endif  // RMRSIM_ADVERSARY_H_
