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

// Safety and budget checks over recorded histories.
//
// Polling safety, per completed Poll:
//   - a true response needs some Signal whose first step precedes the Poll's
//     last step;
//   - a false response is illegal if some Signal's last step precedes the
//     Poll's first step.
// Blocking safety: a completed Wait needs some Signal whose first step
// precedes the Wait's last step.

#ifndef RMRSIM_CHECKER_H_
#define RMRSIM_CHECKER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rmrsim/cost_model.h"
#include "rmrsim/simulation.h"

namespace rmrsim {

enum class ViolationKind : std::uint8_t {
  kPollTrueNoSignal,
  kPollFalseAfterSignal,
  kWaitBeforeSignal,
  kWaitFreeBudget,
  kAmortizedBudget,
  kHarnessMisuse,
};

std::string_view ViolationKindName(ViolationKind kind);

struct Violation {
  ViolationKind kind = ViolationKind::kHarnessMisuse;
  std::vector<std::uint64_t> call_ids;
  // Event positions that let a reader replay and confirm the violation.
  std::vector<std::uint64_t> seqs;
  std::string message;
};

// One JSON object per line: {"kind", "call_ids", "seqs", "message"}.
std::string ToJsonLine(const Violation& v);

// Throws StructuralError when a process's calls overlap or a closed call has
// no response. Polls issued after the same process already saw true are
// reported as HARNESS_MISUSE and left out of the safety checks.
std::vector<Violation> CheckPolling(std::span<const CallRecord> calls);
inline std::vector<Violation> CheckPolling(const History& h) {
  return CheckPolling(h.calls);
}

std::vector<Violation> CheckBlocking(const History& h);

// Flags every call (open or closed) that took more than `bound` steps of its
// own process. Can only falsify wait-freedom.
std::vector<Violation> CheckWaitFree(std::span<const History> histories,
                                     std::int64_t bound);

struct AmortizedResult {
  bool pass = true;
  std::int64_t total = 0;
  std::int64_t k = 0;
};

// Passes iff the total RMRs under `model` are at most c times the number of
// participants.
AmortizedResult CheckAmortized(const History& h, std::int64_t c,
                               CostModel model);

// True if any violation is of a kind other than HARNESS_MISUSE.
bool HasSafetyViolation(std::span<const Violation> violations);

}  // namespace rmrsim

#endif  // RMRSIM_CHECKER_H_
