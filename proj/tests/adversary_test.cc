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

#include <gtest/gtest.h>

#include "rmrsim/analysis.h"
#include "rmrsim/checker.h"

namespace rmrsim {
namespace {

DrillConfig Drill(const std::string& algo, int w,
                  CostModel model = CostModel::kDsm) {
  DrillConfig d;
  d.algorithm = algo;
  d.waiters = w;
  d.model = model;
  return d;
}

// Signal costs traced by hand for the drill's process layout: waiters are
// the lowest ids (skipping a designated signaler), globals live at p1, and
// the automatic signaler is the lowest id whose module stayed unwritten.
TEST(AdversaryTest, QueueSignalerPaysPerWaiter) {
  for (int w : {8, 16, 64}) {
    SeparationReport r = AdversarySeparation(Drill("dsm_queue", w));
    // p1 holds the globals, so p2 signals: G and T, then a Q read per slot
    // and a V write per waiter other than itself.
    EXPECT_EQ(r.signaler, 2);
    EXPECT_EQ(r.signaler_rmrs, 2 * w + 1);
    EXPECT_TRUE(r.stale_waiters.empty());
  }
}

TEST(AdversaryTest, RegistrationSignalerWritesEveryFlag) {
  SeparationReport r = AdversarySeparation(Drill("dsm_registration", 64));
  EXPECT_EQ(r.signaler, 1);
  EXPECT_EQ(r.signaler_rmrs, 64);
  EXPECT_EQ(r.k, 65);
  EXPECT_TRUE(r.stale_waiters.empty());
}

TEST(AdversaryTest, FixedWaitersSignalerAmongWaiters) {
  SeparationReport r = AdversarySeparation(Drill("dsm_fixed_waiters", 64));
  EXPECT_EQ(r.signaler, 1);
  EXPECT_EQ(r.signaler_rmrs, 63);
  EXPECT_EQ(r.k, 64);
}

TEST(AdversaryTest, TerminatingFixedWaiters) {
  SeparationReport r =
      AdversarySeparation(Drill("dsm_fixed_waiters_term", 16));
  // Participation flags sit at p1, so the signaler p2 reads 15 of them
  // remotely and writes 15 remote V flags.
  EXPECT_EQ(r.signaler, 2);
  EXPECT_EQ(r.signaler_rmrs, 30);
  EXPECT_TRUE(r.stale_waiters.empty());
}

TEST(AdversaryTest, CcFlagSignalerPaysOnce) {
  SeparationReport r =
      AdversarySeparation(Drill("cc_flag", 64, CostModel::kCc));
  EXPECT_EQ(r.signaler_rmrs, 1);
  EXPECT_TRUE(r.stale_waiters.empty());
}

TEST(AdversaryTest, CcFlagNeverStabilizesUnderDsm) {
  EXPECT_THROW(AdversarySeparation(Drill("cc_flag", 8)), NonStabilizing);
}

TEST(AdversaryTest, RejectsBlockingAndStrongPrimitivesWithErasure) {
  EXPECT_THROW(AdversarySeparation(Drill("dsm_queue+blocking", 8)),
               DrillInapplicable);
  DrillConfig d = Drill("dsm_queue", 8);
  d.erase_on_discovery = true;
  EXPECT_THROW(AdversarySeparation(d), DrillInapplicable);
  EXPECT_THROW(AdversarySeparation(Drill("dsm_queue", 0)), ConfigError);
}

TEST(AdversaryTest, ErasureFalsifiesAmortizedBudget) {
  DrillConfig d = Drill("dsm_fixed_waiters", 128);
  d.erase_on_discovery = true;
  SeparationReport r = AdversarySeparation(d);
  EXPECT_EQ(r.k, 1);
  EXPECT_EQ(r.signaler_rmrs, 127);
  EXPECT_EQ(r.erased, 127);
  AmortizedResult a = CheckAmortized(r.history, 3, CostModel::kDsm);
  EXPECT_FALSE(a.pass);
  EXPECT_EQ(a.total, 127);
  EXPECT_TRUE(CheckPolling(r.history).empty());
}

TEST(AdversaryTest, ErasedHistoryReplays) {
  DrillConfig d = Drill("dsm_registration", 16);
  d.erase_on_discovery = true;
  SeparationReport r = AdversarySeparation(d);
  EXPECT_LE(r.k, 17);
  EXPECT_TRUE(CheckPolling(r.history).empty());
}

TEST(AdversaryTest, ExplicitSignalerIsHonored) {
  DrillConfig d = Drill("dsm_queue", 8);
  d.signaler = 1;
  SeparationReport r = AdversarySeparation(d);
  EXPECT_EQ(r.signaler, 1);
  // G, T and Q are local to p1; only the V writes are remote.
  EXPECT_EQ(r.signaler_rmrs, 7);
}

TEST(AdversaryTest, JsonHasExactlyTheReportKeys) {
  SeparationReport r = AdversarySeparation(Drill("dsm_queue", 8));
  nlohmann::ordered_json j = ToJson(r);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{
                      "algorithm", "model", "W", "k", "signaler_rmrs",
                      "total_rmr_dsm", "total_rmr_cc", "msg_bus", "msg_dir"}));
  EXPECT_EQ(j["W"], 8);
  EXPECT_EQ(j["model"], "dsm");
  EXPECT_EQ(ToJson(AdversarySeparation(Drill("dsm_queue", 8))).dump(),
            j.dump());
}

}  // namespace
}  // namespace rmrsim
