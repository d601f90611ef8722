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

#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "rmrsim/algorithm.h"

namespace rmrsim {
namespace {

Scenario Roles(const std::string& algo, int n, int waiters) {
  AlgorithmConfig c;
  c.num_procs = n;
  Scenario sc = Scenario::Make(MakeAlgorithm(algo, c));
  sc.scripts[1] = SignalOnce();
  for (ProcId p = 2; p <= waiters + 1; ++p) sc.scripts[p] = PollUntilTrue();
  return sc;
}

std::vector<ProcId> Procs(const History& h) {
  std::vector<ProcId> out;
  for (const ScheduleEntry& e : h.schedule) out.push_back(e.proc);
  return out;
}

TEST(SimulationTest, RoundRobinSmokeRunCompletes) {
  Simulation sim = rmrsim::Run(Roles("cc_flag", 2, 1), SchedulePolicy::RoundRobin());
  EXPECT_TRUE(sim.done());
  EXPECT_FALSE(sim.history().incomplete);
  EXPECT_EQ(sim.history().Fin(), (std::vector<ProcId>{1, 2}));
  EXPECT_TRUE(sim.history().Act().empty());
}

TEST(SimulationTest, SeededRunsAreDeterministic) {
  for (const std::string& algo : AlgorithmNames()) {
    int waiters = algo == "dsm_single_waiter" ? 1 : 4;
    Simulation a = rmrsim::Run(Roles(algo, 5, waiters), SchedulePolicy::Random(7));
    Simulation b = rmrsim::Run(Roles(algo, 5, waiters), SchedulePolicy::Random(7));
    EXPECT_EQ(a.history(), b.history()) << algo;
    EXPECT_EQ(a.ledger(), b.ledger()) << algo;
    EXPECT_EQ(a.memory().Image(), b.memory().Image()) << algo;
  }
}

TEST(SimulationTest, SeedsChangeSchedules) {
  std::set<std::vector<ProcId>> schedules;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    schedules.insert(
        Procs(rmrsim::Run(Roles("dsm_queue", 5, 4), SchedulePolicy::Random(seed))
                  .history()));
  }
  EXPECT_GT(schedules.size(), 5u);
}

TEST(SimulationTest, BudgetExhaustionMarksIncomplete) {
  Simulation sim =
      rmrsim::Run(Roles("dsm_queue", 4, 3), SchedulePolicy::RoundRobin(3));
  EXPECT_TRUE(sim.history().incomplete);
  EXPECT_EQ(sim.history().events.size(), 3u);
}

TEST(SimulationTest, ExplicitSkipsDisabledProcesses) {
  Scenario sc = Roles("cc_flag", 3, 1);
  Simulation sim = rmrsim::Run(sc, SchedulePolicy::Explicit({3, 1, 1, 2, 3}));
  ASSERT_EQ(sim.history().events.size(), 2u);
  EXPECT_EQ(sim.history().events[0].proc, 1);
  EXPECT_EQ(sim.history().events[1].proc, 2);
}

TEST(SimulationTest, CallsOfOneProcessNeverOverlap) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Simulation sim =
        rmrsim::Run(Roles("dsm_registration", 6, 5), SchedulePolicy::Random(seed));
    const History& h = sim.history();
    for (std::size_t i = 0; i < h.events.size(); ++i) {
      ASSERT_EQ(h.events[i].seq, i);
    }
    for (ProcId p = 1; p <= h.num_procs; ++p) {
      std::vector<CallRecord> calls = h.CallsOf(p);
      for (std::size_t i = 1; i < calls.size(); ++i) {
        ASSERT_LT(*calls[i - 1].end_seq, calls[i].start_seq);
      }
    }
  }
}

TEST(SimulationTest, ReplayReproducesHistory) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Scenario sc = Roles("dsm_queue", 5, 4);
    Simulation sim = rmrsim::Run(sc, SchedulePolicy::Random(seed));
    Simulation again = Replay(sc, sim.history().schedule);
    EXPECT_EQ(again.history(), sim.history());
  }
}

TEST(SimulationTest, SoloExtendOfStableWaiterIsFree) {
  Scenario sc = Roles("dsm_queue", 3, 2);
  Simulation sim = rmrsim::Run(sc, SchedulePolicy::Explicit({2, 2, 2}));
  ASSERT_TRUE(sim.idle(2));
  std::int64_t before = sim.ledger().of(2).rmr_dsm;
  Simulation solo = SoloExtend(sim, 2, PollTimes(100));
  EXPECT_EQ(solo.history().CallsOf(2).size(), 101u);
  EXPECT_EQ(solo.ledger().of(2).rmr_dsm, before);

  Simulation again = Replay(sc, solo.history().schedule);
  EXPECT_EQ(again.history().events, solo.history().events);
  EXPECT_EQ(again.history().calls, solo.history().calls);
  EXPECT_EQ(again.history().terminated, solo.history().terminated);
  EXPECT_EQ(again.history().schedule, solo.history().schedule);
}

TEST(SimulationTest, SoloExtendOfCcFlagWaiterPaysUnderDsm) {
  Scenario sc = Roles("cc_flag", 3, 2);
  sc.scripts[2] = PollTimes(5);
  sc.scripts[3] = PollTimes(5);
  Simulation sim = rmrsim::Run(sc, SchedulePolicy::Explicit({2, 3}));
  Simulation solo = SoloExtend(sim, 2, PollTimes(10));
  EXPECT_EQ(solo.ledger().of(2).rmr_dsm, 11);
  EXPECT_EQ(solo.ledger().of(2).rmr_cc, 1);
}

TEST(SimulationTest, SoloExtendOfFinishedProcessIsRefused) {
  Simulation sim = rmrsim::Run(Roles("cc_flag", 2, 1), SchedulePolicy::RoundRobin());
  ASSERT_TRUE(sim.finished(1));
  EXPECT_THROW(SoloExtend(sim, 1, PollTimes(1)), PreconditionError);
}

TEST(EnumerateTest, CountsInterleavingsOfStraightLineScripts) {
  AlgorithmConfig c;
  c.num_procs = 2;
  Scenario sc = Scenario::Make(MakeCcFlag(c));
  sc.scripts[1] = PollTimes(2);
  sc.scripts[2] = PollTimes(2);
  EnumerateOptions opts;
  opts.depth = 4;
  std::set<std::vector<ProcId>> seen;
  std::uint64_t n = Enumerate(sc, opts, [&](const Simulation& sim, bool cut) {
    EXPECT_FALSE(cut);
    EXPECT_TRUE(sim.done());
    seen.insert(Procs(sim.history()));
  });
  EXPECT_EQ(n, 6u);
  EXPECT_EQ(seen.size(), 6u);
}

TEST(EnumerateTest, DepthBoundPrunes) {
  AlgorithmConfig c;
  c.num_procs = 2;
  Scenario sc = Scenario::Make(MakeCcFlag(c));
  sc.scripts[1] = PollTimes(2);
  sc.scripts[2] = PollTimes(2);
  EnumerateOptions opts;
  opts.depth = 2;
  std::uint64_t pruned = 0;
  std::uint64_t n = Enumerate(sc, opts, [&](const Simulation&, bool cut) {
    pruned += cut;
  });
  EXPECT_EQ(n, 4u);
  EXPECT_EQ(pruned, 4u);
}

TEST(EnumerateTest, OverflowReportsExploredCount) {
  EnumerateOptions opts;
  opts.depth = 30;
  opts.max_histories = 100;
  try {
    Enumerate(Roles("dsm_queue", 3, 2), opts, [](const Simulation&, bool) {});
    FAIL() << "expected overflow";
  } catch (const StateSpaceOverflow& e) {
    EXPECT_EQ(e.explored(), 100u);
  }
}

}  // namespace
}  // namespace rmrsim
