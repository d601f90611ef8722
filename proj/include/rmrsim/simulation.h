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

// Deterministic execution of process programs over simulated shared memory.
//
// A Simulation is a value: copying it forks the execution. All interleaving
// decisions come from outside through Step(); every decision is appended to
// the history's schedule so the run can be replayed from initial conditions.

#ifndef RMRSIM_SIMULATION_H_
#define RMRSIM_SIMULATION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rmrsim/algorithm.h"
#include "rmrsim/cost_model.h"
#include "rmrsim/memory.h"
#include "rmrsim/types.h"

namespace rmrsim {

inline constexpr std::int64_t kUnbounded = -1;

// `max_calls` invocations of `proc`, cut short by a true response when
// `until_true` is set.
struct ScriptItem {
  Procedure proc = Procedure::kPoll;
  std::int64_t max_calls = 1;
  bool until_true = false;

  friend bool operator==(const ScriptItem&, const ScriptItem&) = default;
};

using Script = std::vector<ScriptItem>;

Script PollUntilTrue(std::int64_t max_polls = kUnbounded);
Script PollTimes(std::int64_t polls);
Script SignalOnce();
Script WaitOnce();

struct Scenario {
  AlgorithmPtr algorithm;
  // Indexed by process id; slot 0 is unused. An empty script means the
  // process never takes a step unless given one later.
  std::vector<Script> scripts;

  int num_procs() const { return algorithm->num_procs(); }
  static Scenario Make(AlgorithmPtr algorithm);
};

struct CallRecord {
  std::uint64_t call_id = 0;
  ProcId proc = kNoProc;
  Procedure kind = Procedure::kPoll;
  // Seq of the call's first step.
  std::uint64_t start_seq = 0;
  // Seq of the call's last step, absent while the call is open.
  std::optional<std::uint64_t> end_seq;
  std::optional<Word> response;

  bool open() const { return !end_seq.has_value(); }
  friend bool operator==(const CallRecord&, const CallRecord&) = default;
};

// One scheduling decision: step `proc`, or (when `script` is set) replace the
// remainder of `proc`'s script without taking a step.
struct ScheduleEntry {
  ProcId proc = kNoProc;
  std::optional<Script> script;

  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) =
      default;
};

struct History {
  int num_procs = 0;
  std::vector<Event> events;
  // Parallel to `events`.
  std::vector<EventCost> costs;
  std::vector<CallRecord> calls;
  std::vector<ScheduleEntry> schedule;
  // Indexed by process id.
  std::vector<bool> terminated;
  // Set by Run() when the step budget ran out with work left.
  bool incomplete = false;

  bool participates(ProcId p) const;
  bool finished(ProcId p) const;
  bool active(ProcId p) const { return participates(p) && !finished(p); }
  std::vector<ProcId> Par() const;
  std::vector<ProcId> Fin() const;
  std::vector<ProcId> Act() const;

  std::vector<Event> EventsOf(ProcId p) const;
  std::vector<CallRecord> CallsOf(ProcId p) const;
  std::int64_t StepsOf(ProcId p) const;

  friend bool operator==(const History&, const History&) = default;
};

class Simulation {
 public:
  // Checks the roles implied by the scripts against the algorithm.
  explicit Simulation(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  const Algorithm& algorithm() const { return *scenario_.algorithm; }
  int num_procs() const { return scenario_.num_procs(); }
  const History& history() const { return history_; }
  const Memory& memory() const { return memory_; }
  const CacheState& cache() const { return cache_; }
  const RmrLedger& ledger() const { return ledger_; }

  // Has a step to take: inside a call, or idle with script left.
  bool enabled(ProcId p) const;
  // Between calls.
  bool idle(ProcId p) const { return !procs_.at(p).in_call; }
  bool finished(ProcId p) const { return procs_.at(p).finished; }
  std::vector<ProcId> Enabled() const;
  bool done() const { return Enabled().empty(); }

  const LocalState& local(ProcId p) const { return procs_.at(p).local; }
  // Position in the script; changes only at call boundaries.
  std::pair<std::size_t, std::int64_t> script_position(ProcId p) const;
  std::optional<Word> last_response(ProcId p) const {
    return procs_.at(p).last_response;
  }

  // The access p would perform if stepped now; nullopt if p is not enabled.
  std::optional<Action> Peek(ProcId p) const;

  // Takes one step of p (starting its next scripted call if idle).
  const Event& Step(ProcId p);

  // Replaces p's remaining script. p must be idle and not finished.
  void SetScript(ProcId p, Script script);

  // Applies one schedule entry: a step or a script replacement.
  void Apply(const ScheduleEntry& entry);

  void MarkIncomplete() { history_.incomplete = true; }

 private:
  struct ProcState {
    LocalState local;
    bool in_call = false;
    bool finished = false;
    Procedure current = Procedure::kPoll;
    std::size_t call_index = 0;
    std::size_t item = 0;
    std::int64_t done_in_item = 0;
    std::optional<Word> last_response;
    // Set once the harness replaces the scenario's script.
    std::optional<Script> script_override;
    Action pending;
  };

  void FinishCall(ProcId p, ProcState& ps, Word response, std::uint64_t seq);

  Scenario scenario_;
  Memory memory_;
  CacheState cache_;
  RmrLedger ledger_;
  History history_;
  std::vector<ProcState> procs_;
};

enum class PolicyKind : std::uint8_t {
  kRoundRobin,
  kRandom,
  kExplicit,
};

struct SchedulePolicy {
  PolicyKind kind = PolicyKind::kRoundRobin;
  std::uint64_t seed = 0;
  std::vector<ProcId> sequence;
  std::uint64_t budget = 100000;

  static SchedulePolicy RoundRobin(std::uint64_t budget = 100000);
  static SchedulePolicy Random(std::uint64_t seed,
                               std::uint64_t budget = 100000);
  static SchedulePolicy Explicit(std::vector<ProcId> sequence);
};

// Steps the scenario under `policy` until every script is complete or the
// budget is spent. Explicit entries naming a process that cannot step are
// skipped. Running out of budget with work left marks the history
// incomplete; it is not an error.
Simulation Run(Scenario scenario, const SchedulePolicy& policy);

// Continues `sim` with only p's steps, following `script`, until the script
// completes or `budget` steps have been taken.
Simulation SoloExtend(const Simulation& sim, ProcId p, Script script,
                      std::uint64_t budget = 100000);

// Re-executes a schedule from initial conditions.
Simulation Replay(const Scenario& scenario,
                  const std::vector<ScheduleEntry>& schedule);

struct EnumerateOptions {
  std::size_t depth = 30;
  std::uint64_t max_histories = 50'000'000;
};

// Called once per maximal history. `pruned` is set when the depth bound cut
// the history short while some process could still step.
using HistoryVisitor =
    std::function<void(const Simulation& sim, bool pruned)>;

// Depth-first enumeration of every interleaving, branching on processes in
// ascending id order. Returns the number of histories visited. Throws
// StateSpaceOverflow once more than `max_histories` would be visited.
std::uint64_t Enumerate(const Scenario& scenario,
                        const EnumerateOptions& options,
                        const HistoryVisitor& visit);

}  // namespace rmrsim

#endif  // RMRSIM_SIMULATION_H_
