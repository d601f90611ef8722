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

// Remote-memory-reference accounting.
//
// DSM: a step is remote iff it touches a location homed at another process.
// CC: every process has an ideal cache. A read is local iff the reader holds
// a valid copy; every nontrivial attempt goes to memory, refreshes the
// writer's own copy, and invalidates every other copy. Invalidation traffic
// is counted two ways: one broadcast per attempt on a bus, or one message per
// remote copy with an ideal directory.

#ifndef RMRSIM_COST_MODEL_H_
#define RMRSIM_COST_MODEL_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "rmrsim/memory.h"
#include "rmrsim/types.h"

namespace rmrsim {

enum class Access : std::uint8_t { kLocal, kRmr };
enum class CostModel : std::uint8_t { kDsm, kCc };
enum class MessageMode : std::uint8_t { kBus, kIdealDirectory };

std::string_view CostModelName(CostModel model);

// Output record metric names.
inline constexpr std::string_view kMetricRmrDsm = "rmr_dsm";
inline constexpr std::string_view kMetricRmrCc = "rmr_cc";
inline constexpr std::string_view kMetricMsgBus = "msg_bus";
inline constexpr std::string_view kMetricMsgDir = "msg_dir";
inline constexpr std::string_view kMetricSteps = "steps";

// Set of (process, location) pairs with a valid cached copy.
class CacheState {
 public:
  explicit CacheState(int num_procs) : num_procs_(num_procs) {}

  int num_procs() const { return num_procs_; }

  bool holds(ProcId proc, LocId loc) const;
  // Number of processes other than `proc` holding `loc`.
  int RemoteHolders(ProcId proc, LocId loc) const;
  // Locations `proc` currently holds, in ascending order.
  std::vector<LocId> HeldBy(ProcId proc) const;
  std::size_t size() const;

  void Insert(ProcId proc, LocId loc);
  // Drops every copy of `loc` except the one held by `keeper`.
  void InvalidateOthers(ProcId keeper, LocId loc);

  friend bool operator==(const CacheState&, const CacheState&) = default;

 private:
  std::vector<bool>& Row(LocId loc);

  int num_procs_;
  // rows_[loc][proc]; grown on first touch of a location.
  std::vector<std::vector<bool>> rows_;
};

Access ClassifyDsm(const Event& e);

// Classifies `e` against `cache` and advances `cache` past it.
Access ClassifyCc(const Event& e, CacheState& cache);

// Invalidation messages sent by `e`, given the cache just before it.
int CountMessages(const Event& e, const CacheState& cache_before,
                  MessageMode mode);

struct EventCost {
  Access dsm = Access::kLocal;
  Access cc = Access::kLocal;
  int msg_bus = 0;
  int msg_dir = 0;

  bool rmr(CostModel model) const {
    return (model == CostModel::kDsm ? dsm : cc) == Access::kRmr;
  }
  friend bool operator==(const EventCost&, const EventCost&) = default;
};

struct ProcessCounters {
  std::int64_t rmr_dsm = 0;
  std::int64_t rmr_cc = 0;
  std::int64_t msg_bus = 0;
  std::int64_t msg_dir = 0;
  std::int64_t steps = 0;
  // CC RMRs taken by READ/LL steps.
  std::int64_t rmr_cc_read = 0;
  // Steps that were nontrivial attempts.
  std::int64_t nontrivial = 0;

  std::int64_t rmr(CostModel model) const {
    return model == CostModel::kDsm ? rmr_dsm : rmr_cc;
  }
  ProcessCounters& operator+=(const ProcessCounters& o);
  friend bool operator==(const ProcessCounters&, const ProcessCounters&) =
      default;
};

class RmrLedger {
 public:
  explicit RmrLedger(int num_procs);

  int num_procs() const { return num_procs_; }
  const ProcessCounters& of(ProcId proc) const { return counters_.at(proc); }
  ProcessCounters totals() const;

  bool participant(ProcId proc) const { return participant_.at(proc); }
  bool finished(ProcId proc) const { return finished_.at(proc); }
  std::vector<ProcId> participants() const;
  std::vector<ProcId> finished_set() const;

  // Folds one event in. `cache` must reflect the history before `e` and is
  // advanced past it.
  EventCost Update(const Event& e, CacheState& cache);
  void MarkFinished(ProcId proc);

  friend bool operator==(const RmrLedger&, const RmrLedger&) = default;

 private:
  int num_procs_;
  std::vector<ProcessCounters> counters_;
  std::vector<bool> participant_;
  std::vector<bool> finished_;
};

// Ledger for a whole event sequence starting from an empty cache.
RmrLedger FoldLedger(std::span<const Event> events, int num_procs);

}  // namespace rmrsim

#endif  // RMRSIM_COST_MODEL_H_
