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

// Hand-traced step sequences for each algorithm. Expected counts follow the
// location homes: globals at p1, V[i] at p i, R[i] and S of the registration
// algorithm at the signaler.

#include "rmrsim/algorithm.h"

#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "rmrsim/simulation.h"

namespace rmrsim {
namespace {

AlgorithmConfig Config(int n) {
  AlgorithmConfig c;
  c.num_procs = n;
  return c;
}

Simulation Drive(AlgorithmPtr algo,
                 std::vector<std::pair<ProcId, Script>> roles,
                 std::vector<ProcId> sequence) {
  Scenario sc = Scenario::Make(std::move(algo));
  for (auto& [p, s] : roles) sc.scripts[p] = s;
  return rmrsim::Run(sc, SchedulePolicy::Explicit(std::move(sequence)));
}

std::vector<Word> Responses(const History& h, ProcId p) {
  std::vector<Word> out;
  for (const CallRecord& c : h.CallsOf(p)) out.push_back(c.response.value());
  return out;
}

TEST(CcFlagTest, TraceCounts) {
  Simulation sim = Drive(MakeCcFlag(Config(3)),
                         {{1, SignalOnce()},
                          {2, PollUntilTrue()},
                          {3, PollUntilTrue()}},
                         {2, 3, 1, 2, 3});
  const History& h = sim.history();
  ASSERT_TRUE(sim.done());
  EXPECT_EQ(Responses(h, 2), (std::vector<Word>{0, 1}));
  EXPECT_EQ(Responses(h, 3), (std::vector<Word>{0, 1}));
  const RmrLedger& l = sim.ledger();
  EXPECT_EQ(l.of(1).rmr_cc, 1);
  EXPECT_EQ(l.of(2).rmr_cc, 2);
  EXPECT_EQ(l.of(3).rmr_cc, 2);
  EXPECT_EQ(l.of(1).rmr_dsm, 0);
  EXPECT_EQ(l.of(2).rmr_dsm, 2);
  EXPECT_EQ(l.of(1).msg_dir, 2);
  EXPECT_EQ(l.of(1).msg_bus, 1);
  EXPECT_EQ(l.totals().msg_bus, 1);
}

TEST(CcFlagTest, CachedPollsAreFreeUntilSignal) {
  Simulation sim = Drive(MakeCcFlag(Config(2)),
                         {{1, SignalOnce()}, {2, PollTimes(10)}},
                         {2, 2, 2, 2, 2, 1, 2});
  EXPECT_EQ(sim.ledger().of(2).rmr_cc, 2);
  EXPECT_EQ(sim.ledger().of(2).rmr_dsm, 6);
}

TEST(DsmSingleWaiterTest, WaiterRegistersBeforeSignal) {
  Simulation sim = Drive(MakeDsmSingleWaiter(Config(2)),
                         {{1, SignalOnce()}, {2, PollUntilTrue()}},
                         {2, 2, 1, 1, 1, 2});
  ASSERT_TRUE(sim.done());
  EXPECT_EQ(Responses(sim.history(), 2), (std::vector<Word>{0, 1}));
  EXPECT_EQ(sim.ledger().of(2).rmr_dsm, 2);
  EXPECT_EQ(sim.ledger().of(1).rmr_dsm, 1);
  EXPECT_EQ(sim.history().StepsOf(1), 3);
}

TEST(DsmSingleWaiterTest, SignalBeforeWaiter) {
  Simulation sim = Drive(MakeDsmSingleWaiter(Config(2)),
                         {{1, SignalOnce()}, {2, PollUntilTrue()}},
                         {1, 1, 2, 2});
  ASSERT_TRUE(sim.done());
  EXPECT_EQ(Responses(sim.history(), 2), (std::vector<Word>{1}));
  EXPECT_EQ(sim.ledger().of(1).rmr_dsm, 0);
  EXPECT_EQ(sim.ledger().of(2).rmr_dsm, 2);
}

TEST(DsmSingleWaiterTest, LaterPollsAreLocal) {
  Simulation sim = Drive(MakeDsmSingleWaiter(Config(2)),
                         {{2, PollTimes(20)}},
                         std::vector<ProcId>(100, 2));
  EXPECT_EQ(sim.history().CallsOf(2).size(), 20u);
  EXPECT_EQ(sim.ledger().of(2).rmr_dsm, 2);
}

TEST(DsmSingleWaiterTest, RejectsSecondWaiter) {
  Scenario sc = Scenario::Make(MakeDsmSingleWaiter(Config(3)));
  sc.scripts[2] = PollUntilTrue();
  sc.scripts[3] = PollUntilTrue();
  EXPECT_THROW(Simulation{sc}, PreconditionError);
}

TEST(DsmFixedWaitersTest, SignalerWritesEachRemoteFlag) {
  Simulation sim = Drive(MakeDsmFixedWaiters(Config(4), false),
                         {{1, SignalOnce()},
                          {2, PollUntilTrue()},
                          {3, PollUntilTrue()},
                          {4, PollUntilTrue()}},
                         {2, 3, 4, 1, 1, 1, 2, 3, 4});
  ASSERT_TRUE(sim.done());
  EXPECT_EQ(sim.ledger().of(1).rmr_dsm, 3);
  for (ProcId p = 2; p <= 4; ++p) {
    EXPECT_EQ(sim.ledger().of(p).rmr_dsm, 0);
    EXPECT_EQ(Responses(sim.history(), p), (std::vector<Word>{0, 1}));
  }
}

TEST(DsmFixedWaitersTest, SignalerAmongWaitersWritesItsOwnFlagLocally) {
  AlgorithmConfig c = Config(3);
  c.waiters = {1, 2, 3};
  Simulation sim = Drive(MakeDsmFixedWaiters(c, false),
                         {{1, SignalOnce()}}, {1, 1, 1});
  ASSERT_TRUE(sim.done());
  EXPECT_EQ(sim.history().StepsOf(1), 3);
  EXPECT_EQ(sim.ledger().of(1).rmr_dsm, 2);
}

TEST(DsmFixedWaitersTest, NonWaiterMayNotPoll) {
  AlgorithmConfig c = Config(3);
  c.waiters = {2};
  Scenario sc = Scenario::Make(MakeDsmFixedWaiters(c, false));
  sc.scripts[3] = PollUntilTrue();
  EXPECT_THROW(rmrsim::Run(sc, SchedulePolicy::RoundRobin()), PreconditionError);
}

TEST(DsmFixedWaitersTermTest, SignalWaitsForParticipation) {
  Simulation sim = Drive(MakeDsmFixedWaiters(Config(3), true),
                         {{1, SignalOnce()},
                          {2, PollUntilTrue()},
                          {3, PollUntilTrue()}},
                         {2, 2, 3, 3, 1, 1, 1, 1, 2, 3});
  ASSERT_TRUE(sim.done());
  // P[i] live at p1, so the signaler's participation checks are local.
  EXPECT_EQ(sim.ledger().of(1).rmr_dsm, 2);
  EXPECT_EQ(sim.ledger().of(2).rmr_dsm, 1);
  EXPECT_EQ(sim.ledger().of(3).rmr_dsm, 1);
}

TEST(DsmFixedWaitersTermTest, SignalBusyWaitsWithoutWaiters) {
  Scenario sc = Scenario::Make(MakeDsmFixedWaiters(Config(3), true));
  sc.scripts[1] = SignalOnce();
  sc.scripts[2] = PollUntilTrue();
  sc.scripts[3] = PollUntilTrue();
  Simulation sim = rmrsim::Run(sc, SchedulePolicy::Explicit(
                               std::vector<ProcId>(10000, 1)));
  EXPECT_TRUE(sim.history().incomplete);
  ASSERT_EQ(sim.history().CallsOf(1).size(), 1u);
  EXPECT_TRUE(sim.history().CallsOf(1)[0].open());
  EXPECT_EQ(sim.history().StepsOf(1), 10000);
}

TEST(DsmRegistrationTest, SignalerWritesOnlyRegisteredFlags) {
  Simulation sim = Drive(MakeDsmRegistration(Config(3)),
                         {{1, SignalOnce()},
                          {2, PollUntilTrue()},
                          {3, PollUntilTrue()}},
                         {2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 3, 3, 2});
  ASSERT_TRUE(sim.done());
  EXPECT_EQ(sim.history().StepsOf(1), 5);
  EXPECT_EQ(sim.ledger().of(1).rmr_dsm, 1);
  EXPECT_EQ(sim.ledger().of(2).rmr_dsm, 2);
  EXPECT_EQ(sim.ledger().of(3).rmr_dsm, 2);
  EXPECT_EQ(Responses(sim.history(), 2), (std::vector<Word>{0, 1}));
  EXPECT_EQ(Responses(sim.history(), 3), (std::vector<Word>{1}));
}

TEST(DsmRegistrationTest, OnlyDesignatedSignalerSignals) {
  AlgorithmConfig c = Config(3);
  c.signaler = 2;
  Scenario sc = Scenario::Make(MakeDsmRegistration(c));
  sc.scripts[1] = SignalOnce();
  EXPECT_THROW(rmrsim::Run(sc, SchedulePolicy::RoundRobin()), PreconditionError);
}

TEST(DsmQueueTest, TraceCounts) {
  Simulation sim = Drive(MakeDsmQueue(Config(3)),
                         {{1, SignalOnce()},
                          {2, PollUntilTrue()},
                          {3, PollUntilTrue()}},
                         {2, 2, 2, 1, 1, 1, 1, 3, 3, 3, 2});
  ASSERT_TRUE(sim.done());
  EXPECT_EQ(sim.history().StepsOf(1), 4);
  EXPECT_EQ(sim.ledger().of(1).rmr_dsm, 1);
  EXPECT_EQ(sim.ledger().of(2).rmr_dsm, 3);
  EXPECT_EQ(sim.ledger().of(3).rmr_dsm, 3);
  EXPECT_EQ(Responses(sim.history(), 2), (std::vector<Word>{0, 1}));
  EXPECT_EQ(Responses(sim.history(), 3), (std::vector<Word>{1}));
}

TEST(BlockingTest, WaitReturnsAfterSignal) {
  Simulation sim = Drive(MakeAlgorithm("cc_flag+blocking", Config(2)),
                         {{1, SignalOnce()}, {2, WaitOnce()}},
                         {2, 2, 2, 1, 2});
  ASSERT_TRUE(sim.done());
  std::vector<CallRecord> calls = sim.history().CallsOf(2);
  ASSERT_EQ(calls.size(), 1u);
  EXPECT_EQ(calls[0].kind, Procedure::kWait);
  EXPECT_EQ(calls[0].response, 1);
  EXPECT_EQ(sim.history().StepsOf(2), 4);
}

TEST(BlockingTest, WaitNeverReturnsWithoutSignal) {
  Simulation sim = Drive(MakeAlgorithm("dsm_queue+blocking", Config(2)),
                         {{2, WaitOnce()}}, std::vector<ProcId>(1000, 2));
  ASSERT_EQ(sim.history().CallsOf(2).size(), 1u);
  EXPECT_TRUE(sim.history().CallsOf(2)[0].open());
}

TEST(MutantTest, SignalLeavesWaiterFlagUnset) {
  AlgorithmConfig c = Config(2);
  c.omit_remote_write = true;
  Simulation sim = Drive(MakeDsmSingleWaiter(c),
                         {{1, SignalOnce()}, {2, PollTimes(2)}},
                         {2, 2, 1, 1, 1, 2});
  EXPECT_EQ(Responses(sim.history(), 2), (std::vector<Word>{0, 0}));
}

TEST(RegistryTest, NamesAndPrimitives) {
  const std::vector<std::string> expected = {
      "cc_flag",          "dsm_single_waiter", "dsm_fixed_waiters",
      "dsm_fixed_waiters_term", "dsm_registration", "dsm_queue"};
  EXPECT_EQ(AlgorithmNames(), expected);
  for (const std::string& name : expected) {
    AlgorithmPtr a = MakeAlgorithm(name, Config(4));
    EXPECT_EQ(a->name(), name);
    EXPECT_EQ(a->read_write_only(), name != "dsm_queue") << name;
    AlgorithmPtr b = MakeAlgorithm(name + "+blocking", Config(4));
    EXPECT_EQ(b->name(), name + "+blocking");
    EXPECT_TRUE(IsBlockingName(b->name()));
  }
  EXPECT_TRUE(Allows(MakeAlgorithm("dsm_queue", Config(2))->primitives(),
                     OpKind::kFai));
  EXPECT_THROW(MakeAlgorithm("tournament", Config(2)), ConfigError);
}

TEST(RegistryTest, GlobalsHomeIsConfigurable) {
  AlgorithmConfig c = Config(3);
  c.globals_home = 3;
  Memory m = MakeCcFlag(c)->MakeMemory();
  EXPECT_EQ(m.home(*m.Find("B")), 3);
}

}  // namespace
}  // namespace rmrsim
