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

#include "rmrsim/adversary.h"

#include <algorithm>

#include "rmrsim/algorithm.h"
#include "rmrsim/analysis.h"

namespace rmrsim {

namespace {

struct Setup {
  AlgorithmPtr algorithm;
  std::vector<ProcId> waiters;
};

Setup Build(const DrillConfig& config) {
  if (config.waiters < 1) throw ConfigError("drill needs at least one waiter");
  if (IsBlockingName(config.algorithm)) {
    throw DrillInapplicable("the drill needs polling semantics; " +
                            config.algorithm + " blocks in Wait");
  }
  // Probe for a designated signaler; it must not be counted as a waiter.
  AlgorithmConfig probe;
  probe.num_procs = config.waiters + config.extra_procs + 1;
  probe.globals_home = 1;
  probe.signaler = config.signaler == kNoProc ? 1 : config.signaler;
  std::optional<ProcId> designated =
      MakeAlgorithm(config.algorithm, probe)->designated_signaler();

  AlgorithmConfig ac;
  ac.num_procs = config.waiters + config.extra_procs + (designated ? 1 : 0);
  ac.globals_home = config.globals_home;
  ac.signaler = probe.signaler;
  Setup s;
  for (ProcId p = 1; static_cast<int>(s.waiters.size()) < config.waiters;
       ++p) {
    if (designated && p == *designated) continue;
    s.waiters.push_back(p);
  }
  ac.waiters = s.waiters;
  s.algorithm = MakeAlgorithm(config.algorithm, ac);
  return s;
}

ProcId ChooseSignaler(const DrillConfig& config, const Simulation& sim) {
  if (config.signaler != kNoProc) return config.signaler;
  if (auto d = sim.algorithm().designated_signaler()) return *d;
  std::vector<bool> written(sim.num_procs() + 1, false);
  for (const Event& e : sim.history().events) {
    if (e.wrote()) written[e.home] = true;
  }
  for (ProcId p = 1; p <= sim.num_procs(); ++p) {
    if (!written[p]) return p;
  }
  throw ConfigError("every memory module was written during stabilization; "
                    "rerun with more processes");
}

// Active process the signaler's next access would see or write into.
std::optional<ProcId> Victim(const Simulation& sim, ProcId s,
                             const Action& next) {
  const History& h = sim.history();
  if (next.op.observes()) {
    ProcId w = sim.memory().last_writer(next.loc);
    if (w != kNoProc && w != s && h.active(w)) return w;
  }
  if (!next.op.trivial()) {
    ProcId home = sim.memory().home(next.loc);
    if (home != s && h.active(home)) return home;
  }
  return std::nullopt;
}

}  // namespace

SeparationReport AdversarySeparation(const DrillConfig& config) {
  Setup setup = Build(config);
  if (config.erase_on_discovery && !setup.algorithm->read_write_only()) {
    throw DrillInapplicable("erase-on-discovery applies to read/write-only "
                            "algorithms; " +
                            config.algorithm + " uses stronger primitives");
  }
  Scenario scenario = Scenario::Make(setup.algorithm);
  for (ProcId w : setup.waiters) scenario.scripts[w] = PollUntilTrue();
  Simulation sim(scenario);

  StabilityOptions stability;
  stability.model = config.model;
  stability.max_configurations = config.max_configurations;

  SeparationReport report;
  report.algorithm = config.algorithm;
  report.model = config.model;
  report.waiters = config.waiters;
  report.num_procs = sim.num_procs();

  // Stabilize. Each round every waiter completes one Poll, interleaved at
  // step granularity.
  for (;;) {
    std::vector<bool> polled(sim.num_procs() + 1, false);
    std::size_t remaining = setup.waiters.size();
    while (remaining > 0) {
      for (ProcId w : setup.waiters) {
        if (polled[w]) continue;
        sim.Step(w);
        if (sim.idle(w)) {
          polled[w] = true;
          --remaining;
        }
      }
    }
    ++report.rounds;
    for (ProcId w : setup.waiters) {
      if (sim.finished(w)) {
        throw SimError("p" + std::to_string(w) +
                       " saw a signal during stabilization");
      }
    }
    bool all_stable = true;
    try {
      for (ProcId w : setup.waiters) {
        if (CheckStability(sim, w, stability).verdict != Stability::kStable) {
          all_stable = false;
          break;
        }
      }
    } catch (const UndecidedError& e) {
      throw NonStabilizing(std::string("stability undecided: ") + e.what());
    }
    if (all_stable) break;
    if (report.rounds >= config.max_rounds) {
      throw NonStabilizing(config.algorithm + " under " +
                           std::string(CostModelName(config.model)) +
                           ": waiters still unstable after " +
                           std::to_string(report.rounds) + " rounds");
    }
  }

  const ProcId s = ChooseSignaler(config, sim);
  report.signaler = s;
  if (s < 1 || s > sim.num_procs()) {
    throw ConfigError("signaler p" + std::to_string(s) + " outside 1.." +
                      std::to_string(sim.num_procs()));
  }
  sim.SetScript(s, SignalOnce());
  std::uint64_t steps = 0;
  while (sim.enabled(s)) {
    if (steps >= config.signal_budget) {
      throw DrillInapplicable("Signal by p" + std::to_string(s) +
                              " did not complete within " +
                              std::to_string(config.signal_budget) +
                              " solo steps");
    }
    if (config.erase_on_discovery) {
      while (auto victim = Victim(sim, s, *sim.Peek(s))) {
        if (!ValidateErasure(sim.history(), *victim)) break;
        sim = Erase(sim, *victim);
        ++report.erased;
      }
    }
    sim.Step(s);
    ++steps;
  }

  for (ProcId w : setup.waiters) {
    if (w == s || !sim.history().active(w)) continue;
    Simulation probe = SoloExtend(sim, w, PollTimes(1));
    if (probe.last_response(w).value_or(0) == 0) {
      report.stale_waiters.push_back(w);
    }
  }

  if (config.erase_on_discovery) {
    for (ProcId q : sim.history().Act()) {
      if (q == s) continue;
      if (ValidateErasure(sim.history(), q)) {
        sim = Erase(sim, q);
        ++report.erased;
      }
    }
  }

  const History& h = sim.history();
  const CallRecord* signal = nullptr;
  for (const CallRecord& c : h.calls) {
    if (c.proc == s && c.kind == Procedure::kSignal) signal = &c;
  }
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    if (signal && h.events[i].call_id == signal->call_id &&
        h.costs[i].rmr(config.model)) {
      ++report.signaler_rmrs;
    }
  }
  const RmrLedger& ledger = sim.ledger();
  ProcessCounters totals = ledger.totals();
  report.k = static_cast<int>(ledger.participants().size());
  report.total_rmr_dsm = totals.rmr_dsm;
  report.total_rmr_cc = totals.rmr_cc;
  report.msg_bus = totals.msg_bus;
  report.msg_dir = totals.msg_dir;
  for (ProcId p = 0; p <= sim.num_procs(); ++p) {
    report.per_process.push_back(ledger.of(p));
  }
  report.history = h;
  return report;
}

nlohmann::ordered_json ToJson(const SeparationReport& report) {
  nlohmann::ordered_json j;
  j["algorithm"] = report.algorithm;
  j["model"] = CostModelName(report.model);
  j["W"] = report.waiters;
  j["k"] = report.k;
  j["signaler_rmrs"] = report.signaler_rmrs;
  j["total_rmr_dsm"] = report.total_rmr_dsm;
  j["total_rmr_cc"] = report.total_rmr_cc;
  j["msg_bus"] = report.msg_bus;
  j["msg_dir"] = report.msg_dir;
  return j;
}

}  // namespace rmrsim
