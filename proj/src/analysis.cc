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

#include "rmrsim/analysis.h"

#include <set>
#include <string>
#include <vector>

namespace rmrsim {

bool Sees(const History& h, ProcId p, ProcId q) {
  for (const Event& e : h.events) {
    if (e.proc == p && e.op.observes() && e.writer_before == q) return true;
  }
  return false;
}

bool Touches(const History& h, ProcId p, ProcId q) {
  for (const Event& e : h.events) {
    if (e.proc == p && e.home == q) return true;
  }
  return false;
}

bool ValidateErasure(const History& h, ProcId p) {
  if (!h.active(p)) {
    throw PreconditionError("erasure target p" + std::to_string(p) +
                            " is not active");
  }
  for (const Event& e : h.events) {
    if (e.proc != p && e.op.observes() && e.writer_before == p) return false;
  }
  return true;
}

bool EquivalentSteps(const Event& a, const Event& b) {
  if (a.proc != b.proc || !(a.op == b.op) || a.loc != b.loc ||
      a.home != b.home || a.value_read != b.value_read ||
      a.value_written != b.value_written || a.success != b.success) {
    return false;
  }
  return !a.op.observes() || a.writer_before == b.writer_before;
}

namespace {

bool SameCalls(const std::vector<CallRecord>& a,
               const std::vector<CallRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].kind != b[i].kind || a[i].open() != b[i].open() ||
        a[i].response != b[i].response) {
      return false;
    }
  }
  return true;
}

}  // namespace

Simulation Erase(const Simulation& sim, ProcId p) {
  const History& h = sim.history();
  if (!ValidateErasure(h, p)) {
    throw PreconditionError("refusing to erase p" + std::to_string(p) +
                            ": another process sees it");
  }
  std::vector<ScheduleEntry> schedule;
  schedule.reserve(h.schedule.size());
  for (const ScheduleEntry& entry : h.schedule) {
    if (entry.proc != p) schedule.push_back(entry);
  }

  auto diverged = [p](const std::string& why) {
    return SoundnessError("replay without p" + std::to_string(p) +
                          " diverged: " + why);
  };
  Simulation replay = [&] {
    try {
      return Replay(sim.scenario(), schedule);
    } catch (const SoundnessError&) {
      throw;
    } catch (const SimError& e) {
      throw diverged(e.what());
    }
  }();
  if (h.incomplete) replay.MarkIncomplete();

  const History& r = replay.history();
  for (ProcId q = 1; q <= h.num_procs; ++q) {
    if (q == p) continue;
    std::vector<Event> before = h.EventsOf(q);
    std::vector<Event> after = r.EventsOf(q);
    if (before.size() != after.size()) {
      throw diverged("p" + std::to_string(q) + " took " +
                     std::to_string(after.size()) + " steps instead of " +
                     std::to_string(before.size()));
    }
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (!EquivalentSteps(before[i], after[i])) {
        throw diverged("step " + std::to_string(i) + " of p" +
                       std::to_string(q) + " differs");
      }
    }
    if (!SameCalls(h.CallsOf(q), r.CallsOf(q))) {
      throw diverged("calls of p" + std::to_string(q) + " differ");
    }
    if (h.terminated[q] != r.terminated[q]) {
      throw diverged("termination of p" + std::to_string(q) + " differs");
    }
  }
  return replay;
}

namespace {

std::vector<Word> Configuration(const Simulation& sim, ProcId p,
                                CostModel model) {
  std::vector<Word> config;
  const LocalState& local = sim.local(p);
  config.insert(config.end(), local.reg.begin(), local.reg.end());
  auto last = sim.last_response(p);
  config.push_back(last.has_value());
  config.push_back(last.value_or(0));
  const Memory& memory = sim.memory();
  auto add = [&](LocId loc) {
    config.push_back(loc.index());
    config.push_back(memory.value(loc));
    config.push_back(memory.linked(p, loc));
  };
  if (model == CostModel::kDsm) {
    for (std::uint32_t i = 0; i < memory.size(); ++i) {
      if (memory.home(LocId(i)) == p) add(LocId(i));
    }
  } else {
    for (LocId loc : sim.cache().HeldBy(p)) add(loc);
  }
  return config;
}

}  // namespace

StabilityVerdict CheckStability(const Simulation& sim, ProcId p,
                                const StabilityOptions& options) {
  if (!sim.history().active(p)) {
    throw PreconditionError("stability is defined for active processes; p" +
                            std::to_string(p) + " is not");
  }
  if (!sim.idle(p)) {
    throw PreconditionError("p" + std::to_string(p) + " is inside a call");
  }
  Simulation solo = sim;
  solo.SetScript(p, PollUntilTrue());

  StabilityVerdict out;
  std::set<std::vector<Word>> seen;
  for (;;) {
    if (solo.finished(p)) {
      // A Poll returned true; a solo run stops polling here.
      out.verdict = Stability::kStable;
      break;
    }
    if (!seen.insert(Configuration(solo, p, options.model)).second) {
      out.verdict = Stability::kStable;
      break;
    }
    if (seen.size() > options.max_configurations) {
      throw UndecidedError("p" + std::to_string(p) + ": " +
                           std::to_string(seen.size()) +
                           " solo configurations without a repeat or RMR");
    }
    do {
      if (out.solo_steps >= options.max_steps) {
        throw UndecidedError("p" + std::to_string(p) + ": solo Poll ran " +
                             std::to_string(out.solo_steps) +
                             " steps without returning");
      }
      solo.Step(p);
      ++out.solo_steps;
      if (solo.history().costs.back().rmr(options.model)) {
        out.verdict = Stability::kUnstable;
        out.configurations = seen.size();
        return out;
      }
    } while (!solo.idle(p));
  }
  out.configurations = seen.size();
  return out;
}

}  // namespace rmrsim
