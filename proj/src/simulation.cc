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

#include "rmrsim/simulation.h"

#include <algorithm>
#include <random>
#include <utility>

namespace rmrsim {

Script PollUntilTrue(std::int64_t max_polls) {
  return {{Procedure::kPoll, max_polls, true}};
}

Script PollTimes(std::int64_t polls) {
  return {{Procedure::kPoll, polls, true}};
}

Script SignalOnce() { return {{Procedure::kSignal, 1, false}}; }

Script WaitOnce() { return {{Procedure::kWait, 1, false}}; }

Scenario Scenario::Make(AlgorithmPtr algorithm) {
  Scenario s;
  s.scripts.resize(algorithm->num_procs() + 1);
  s.algorithm = std::move(algorithm);
  return s;
}

bool History::participates(ProcId p) const {
  for (const Event& e : events) {
    if (e.proc == p) return true;
  }
  return false;
}

bool History::finished(ProcId p) const {
  return p >= 0 && static_cast<std::size_t>(p) < terminated.size() &&
         terminated[p] && participates(p);
}

std::vector<ProcId> History::Par() const {
  std::vector<bool> seen(num_procs + 1, false);
  for (const Event& e : events) seen[e.proc] = true;
  std::vector<ProcId> out;
  for (ProcId p = 1; p <= num_procs; ++p) {
    if (seen[p]) out.push_back(p);
  }
  return out;
}

std::vector<ProcId> History::Fin() const {
  std::vector<ProcId> out;
  for (ProcId p : Par()) {
    if (terminated[p]) out.push_back(p);
  }
  return out;
}

std::vector<ProcId> History::Act() const {
  std::vector<ProcId> out;
  for (ProcId p : Par()) {
    if (!terminated[p]) out.push_back(p);
  }
  return out;
}

std::vector<Event> History::EventsOf(ProcId p) const {
  std::vector<Event> out;
  for (const Event& e : events) {
    if (e.proc == p) out.push_back(e);
  }
  return out;
}

std::vector<CallRecord> History::CallsOf(ProcId p) const {
  std::vector<CallRecord> out;
  for (const CallRecord& c : calls) {
    if (c.proc == p) out.push_back(c);
  }
  return out;
}

std::int64_t History::StepsOf(ProcId p) const {
  return std::count_if(events.begin(), events.end(),
                       [p](const Event& e) { return e.proc == p; });
}

namespace {

struct Upcoming {
  std::size_t item;
  Procedure proc;
};

bool ItemSpent(const ScriptItem& it, std::int64_t done,
               const std::optional<Word>& last_response) {
  if (it.max_calls != kUnbounded && done >= it.max_calls) return true;
  return it.until_true && done > 0 && last_response.value_or(0) != 0;
}

std::optional<Upcoming> FindUpcoming(const Script& script, std::size_t item,
                                     std::int64_t done,
                                     const std::optional<Word>& last) {
  while (item < script.size()) {
    if (!ItemSpent(script[item], done, last)) {
      return Upcoming{item, script[item].proc};
    }
    ++item;
    done = 0;
  }
  return std::nullopt;
}

void CheckRolesFromScripts(const Scenario& scenario) {
  std::vector<ProcId> pollers;
  std::vector<ProcId> signalers;
  for (ProcId p = 1; p < static_cast<ProcId>(scenario.scripts.size()); ++p) {
    bool polls = false;
    bool signals = false;
    for (const ScriptItem& it : scenario.scripts[p]) {
      if (it.proc == Procedure::kSignal) {
        signals = true;
      } else {
        polls = true;
      }
    }
    if (polls) pollers.push_back(p);
    if (signals) signalers.push_back(p);
  }
  scenario.algorithm->CheckRoles(pollers, signalers);
  for (ProcId p = 1; p < static_cast<ProcId>(scenario.scripts.size()); ++p) {
    for (const ScriptItem& it : scenario.scripts[p]) {
      scenario.algorithm->CheckCall(p, it.proc);
    }
  }
}

}  // namespace

Simulation::Simulation(Scenario scenario)
    : scenario_(std::move(scenario)),
      memory_(scenario_.algorithm->MakeMemory()),
      cache_(scenario_.num_procs()),
      ledger_(scenario_.num_procs()) {
  const int n = scenario_.num_procs();
  if (scenario_.scripts.size() > static_cast<std::size_t>(n) + 1) {
    throw ConfigError("scenario has scripts for more than " +
                      std::to_string(n) + " processes");
  }
  scenario_.scripts.resize(n + 1);
  CheckRolesFromScripts(scenario_);
  history_.num_procs = n;
  history_.terminated.assign(n + 1, false);
  procs_.resize(n + 1);
}

std::pair<std::size_t, std::int64_t> Simulation::script_position(
    ProcId p) const {
  const ProcState& ps = procs_.at(p);
  return {ps.item, ps.done_in_item};
}

bool Simulation::enabled(ProcId p) const {
  if (p < 1 || p > num_procs()) return false;
  const ProcState& ps = procs_[p];
  if (ps.finished) return false;
  if (ps.in_call) return true;
  const Script& script =
      ps.script_override ? *ps.script_override : scenario_.scripts[p];
  return FindUpcoming(script, ps.item, ps.done_in_item, ps.last_response)
      .has_value();
}

std::vector<ProcId> Simulation::Enabled() const {
  std::vector<ProcId> out;
  for (ProcId p = 1; p <= num_procs(); ++p) {
    if (enabled(p)) out.push_back(p);
  }
  return out;
}

std::optional<Action> Simulation::Peek(ProcId p) const {
  if (!enabled(p)) return std::nullopt;
  const ProcState& ps = procs_[p];
  if (ps.in_call) return ps.pending;
  const Script& script =
      ps.script_override ? *ps.script_override : scenario_.scripts[p];
  auto next =
      FindUpcoming(script, ps.item, ps.done_in_item, ps.last_response);
  LocalState scratch = ps.local;
  scratch.pc = 0;
  return algorithm().Next(p, next->proc, scratch, nullptr);
}

const Event& Simulation::Step(ProcId p) {
  if (!enabled(p)) {
    throw PreconditionError("p" + std::to_string(p) + " cannot take a step");
  }
  ProcState& ps = procs_[p];
  if (!ps.in_call) {
    const Script& script =
        ps.script_override ? *ps.script_override : scenario_.scripts[p];
    auto next =
        FindUpcoming(script, ps.item, ps.done_in_item, ps.last_response);
    if (next->item != ps.item) {
      ps.item = next->item;
      ps.done_in_item = 0;
    }
    algorithm().CheckCall(p, next->proc);
    ps.current = next->proc;
    ps.local.pc = 0;
    ps.pending = algorithm().Next(p, ps.current, ps.local, nullptr);
    if (!ps.pending.is_access()) {
      throw SimError(algorithm().name() + ": " +
                     std::string(ProcedureName(ps.current)) +
                     " returned without taking a step");
    }
    ps.in_call = true;
    ps.call_index = history_.calls.size();
    CallRecord call;
    call.call_id = history_.calls.size();
    call.proc = p;
    call.kind = ps.current;
    call.start_seq = memory_.steps();
    history_.calls.push_back(call);
  }

  const Action& a = ps.pending;
  if (!Allows(algorithm().primitives(), a.op.kind)) {
    throw SimError(algorithm().name() + " issued undeclared primitive " +
                   std::string(OpKindName(a.op.kind)));
  }
  Event e = memory_.Apply(p, a.op, a.loc, ps.call_index);
  EventCost cost = ledger_.Update(e, cache_);
  history_.events.push_back(e);
  history_.costs.push_back(cost);
  history_.schedule.push_back(ScheduleEntry{p, std::nullopt});

  StepResult result{e.value_read, e.success};
  Action next = algorithm().Next(p, ps.current, ps.local, &result);
  if (next.is_access()) {
    ps.pending = next;
  } else {
    FinishCall(p, ps, next.response, e.seq);
  }
  return history_.events.back();
}

void Simulation::FinishCall(ProcId p, ProcState& ps, Word response,
                            std::uint64_t seq) {
  CallRecord& call = history_.calls[ps.call_index];
  call.end_seq = seq;
  call.response = response;
  ps.in_call = false;
  ps.last_response = response;
  ++ps.done_in_item;
  const Script& script =
      ps.script_override ? *ps.script_override : scenario_.scripts[p];
  if (!FindUpcoming(script, ps.item, ps.done_in_item, ps.last_response)) {
    ps.finished = true;
    history_.terminated[p] = true;
    ledger_.MarkFinished(p);
  }
}

void Simulation::SetScript(ProcId p, Script script) {
  if (p < 1 || p > num_procs()) {
    throw PreconditionError("p" + std::to_string(p) + " outside 1.." +
                            std::to_string(num_procs()));
  }
  ProcState& ps = procs_[p];
  if (ps.finished) {
    throw PreconditionError("p" + std::to_string(p) + " has terminated");
  }
  if (ps.in_call) {
    throw PreconditionError("p" + std::to_string(p) + " is inside a call");
  }
  for (const ScriptItem& it : script) algorithm().CheckCall(p, it.proc);
  history_.schedule.push_back(ScheduleEntry{p, script});
  ps.script_override = std::move(script);
  ps.item = 0;
  ps.done_in_item = 0;
  ps.last_response.reset();
}

void Simulation::Apply(const ScheduleEntry& entry) {
  if (entry.script) {
    SetScript(entry.proc, *entry.script);
  } else {
    Step(entry.proc);
  }
}

SchedulePolicy SchedulePolicy::RoundRobin(std::uint64_t budget) {
  SchedulePolicy p;
  p.kind = PolicyKind::kRoundRobin;
  p.budget = budget;
  return p;
}

SchedulePolicy SchedulePolicy::Random(std::uint64_t seed,
                                      std::uint64_t budget) {
  SchedulePolicy p;
  p.kind = PolicyKind::kRandom;
  p.seed = seed;
  p.budget = budget;
  return p;
}

SchedulePolicy SchedulePolicy::Explicit(std::vector<ProcId> sequence) {
  SchedulePolicy p;
  p.kind = PolicyKind::kExplicit;
  p.budget = sequence.size();
  p.sequence = std::move(sequence);
  return p;
}

Simulation Run(Scenario scenario, const SchedulePolicy& policy) {
  Simulation sim(std::move(scenario));
  const int n = sim.num_procs();
  std::uint64_t steps = 0;
  switch (policy.kind) {
    case PolicyKind::kRoundRobin: {
      ProcId cursor = 0;
      while (steps < policy.budget) {
        ProcId chosen = kNoProc;
        for (int k = 1; k <= n; ++k) {
          ProcId p = (cursor + k - 1) % n + 1;
          if (sim.enabled(p)) {
            chosen = p;
            break;
          }
        }
        if (chosen == kNoProc) break;
        sim.Step(chosen);
        cursor = chosen;
        ++steps;
      }
      break;
    }
    case PolicyKind::kRandom: {
      // Modulo reduction keeps the choice sequence identical across standard
      // library implementations.
      std::mt19937_64 rng(policy.seed);
      while (steps < policy.budget) {
        std::vector<ProcId> en = sim.Enabled();
        if (en.empty()) break;
        sim.Step(en[rng() % en.size()]);
        ++steps;
      }
      break;
    }
    case PolicyKind::kExplicit:
      for (ProcId p : policy.sequence) {
        if (steps >= policy.budget) break;
        if (p < 1 || p > n) {
          throw ConfigError("explicit schedule names p" + std::to_string(p) +
                            " outside 1.." + std::to_string(n));
        }
        if (!sim.enabled(p)) continue;
        sim.Step(p);
        ++steps;
      }
      break;
  }
  if (!sim.done()) sim.MarkIncomplete();
  return sim;
}

Simulation SoloExtend(const Simulation& sim, ProcId p, Script script,
                      std::uint64_t budget) {
  Simulation out = sim;
  if (p < 1 || p > out.num_procs() || out.finished(p)) {
    throw PreconditionError("solo extension needs a live process, p" +
                            std::to_string(p) + " is not");
  }
  std::uint64_t steps = 0;
  while (!out.idle(p) && steps < budget) {
    out.Step(p);
    ++steps;
  }
  if (!out.idle(p)) {
    out.MarkIncomplete();
    return out;
  }
  out.SetScript(p, std::move(script));
  while (out.enabled(p) && steps < budget) {
    out.Step(p);
    ++steps;
  }
  if (out.enabled(p)) out.MarkIncomplete();
  return out;
}

Simulation Replay(const Scenario& scenario,
                  const std::vector<ScheduleEntry>& schedule) {
  Simulation sim(scenario);
  for (const ScheduleEntry& entry : schedule) sim.Apply(entry);
  return sim;
}

namespace {

class Enumerator {
 public:
  Enumerator(const EnumerateOptions& options, const HistoryVisitor& visit)
      : options_(options), visit_(visit) {}

  void Explore(Simulation& sim) {
    std::vector<ProcId> en = sim.Enabled();
    if (en.empty() || sim.history().events.size() >= options_.depth) {
      if (count_ >= options_.max_histories) {
        throw StateSpaceOverflow(
            "enumeration exceeded " + std::to_string(options_.max_histories) +
                " histories",
            count_);
      }
      ++count_;
      visit_(sim, !en.empty());
      return;
    }
    for (std::size_t i = 0; i + 1 < en.size(); ++i) {
      Simulation child = sim;
      child.Step(en[i]);
      Explore(child);
    }
    sim.Step(en.back());
    Explore(sim);
  }

  std::uint64_t count() const { return count_; }

 private:
  const EnumerateOptions& options_;
  const HistoryVisitor& visit_;
  std::uint64_t count_ = 0;
};

}  // namespace

std::uint64_t Enumerate(const Scenario& scenario,
                        const EnumerateOptions& options,
                        const HistoryVisitor& visit) {
  Simulation root(scenario);
  Enumerator e(options, visit);
  e.Explore(root);
  return e.count();
}

}  // namespace rmrsim
