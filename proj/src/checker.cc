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

#include "rmrsim/checker.h"

#include <algorithm>
#include <map>

#include "json.hpp"

namespace rmrsim {

std::string_view ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kPollTrueNoSignal:
      return "POLL_TRUE_NO_SIGNAL";
    case ViolationKind::kPollFalseAfterSignal:
      return "POLL_FALSE_AFTER_SIGNAL";
    case ViolationKind::kWaitBeforeSignal:
      return "WAIT_BEFORE_SIGNAL";
    case ViolationKind::kWaitFreeBudget:
      return "WAITFREE_BUDGET";
    case ViolationKind::kAmortizedBudget:
      return "AMORTIZED_BUDGET";
    case ViolationKind::kHarnessMisuse:
      return "HARNESS_MISUSE";
  }
  return "?";
}

std::string ToJsonLine(const Violation& v) {
  nlohmann::ordered_json j;
  j["kind"] = ViolationKindName(v.kind);
  j["call_ids"] = v.call_ids;
  j["seqs"] = v.seqs;
  j["message"] = v.message;
  return j.dump();
}

namespace {

void CheckStructure(std::span<const CallRecord> calls) {
  std::map<ProcId, std::vector<const CallRecord*>> by_proc;
  for (const CallRecord& c : calls) {
    if (c.end_seq && *c.end_seq < c.start_seq) {
      throw StructuralError("call " + std::to_string(c.call_id) +
                            " ends before it starts");
    }
    if (c.end_seq && !c.response) {
      throw StructuralError("call " + std::to_string(c.call_id) +
                            " completed without a response");
    }
    by_proc[c.proc].push_back(&c);
  }
  for (auto& [proc, list] : by_proc) {
    std::sort(list.begin(), list.end(),
              [](const CallRecord* a, const CallRecord* b) {
                return a->start_seq < b->start_seq;
              });
    for (std::size_t i = 1; i < list.size(); ++i) {
      const CallRecord& prev = *list[i - 1];
      if (prev.open() || *prev.end_seq >= list[i]->start_seq) {
        throw StructuralError("calls " + std::to_string(prev.call_id) +
                              " and " + std::to_string(list[i]->call_id) +
                              " of p" + std::to_string(proc) + " overlap");
      }
    }
  }
}

std::string Describe(const CallRecord& c) {
  return std::string(ProcedureName(c.kind)) + " #" +
         std::to_string(c.call_id) + " of p" + std::to_string(c.proc);
}

}  // namespace

std::vector<Violation> CheckPolling(std::span<const CallRecord> calls) {
  CheckStructure(calls);
  std::vector<const CallRecord*> signals;
  for (const CallRecord& c : calls) {
    if (c.kind == Procedure::kSignal) signals.push_back(&c);
  }

  std::vector<const CallRecord*> polls;
  for (const CallRecord& c : calls) {
    if (c.kind == Procedure::kPoll) polls.push_back(&c);
  }
  std::sort(polls.begin(), polls.end(),
            [](const CallRecord* a, const CallRecord* b) {
              return a->start_seq < b->start_seq;
            });

  std::vector<Violation> out;
  std::map<ProcId, std::uint64_t> saw_true;  // proc -> call id
  for (const CallRecord* poll : polls) {
    if (auto it = saw_true.find(poll->proc); it != saw_true.end()) {
      out.push_back({ViolationKind::kHarnessMisuse,
                     {it->second, poll->call_id},
                     {poll->start_seq},
                     Describe(*poll) + " issued after a true response"});
      continue;
    }
    if (poll->open()) continue;
    if (*poll->response != 0) {
      saw_true.emplace(poll->proc, poll->call_id);
      bool begun = std::any_of(signals.begin(), signals.end(),
                               [&](const CallRecord* s) {
                                 return s->start_seq < *poll->end_seq;
                               });
      if (!begun) {
        out.push_back({ViolationKind::kPollTrueNoSignal,
                       {poll->call_id},
                       {poll->start_seq, *poll->end_seq},
                       Describe(*poll) +
                           " returned true before any Signal began"});
      }
    } else {
      for (const CallRecord* s : signals) {
        if (s->end_seq && *s->end_seq < poll->start_seq) {
          out.push_back({ViolationKind::kPollFalseAfterSignal,
                         {poll->call_id, s->call_id},
                         {*s->end_seq, poll->start_seq, *poll->end_seq},
                         Describe(*poll) + " returned false after " +
                             Describe(*s) + " completed"});
          break;
        }
      }
    }
  }
  return out;
}

std::vector<Violation> CheckBlocking(const History& h) {
  CheckStructure(h.calls);
  std::vector<Violation> out;
  for (const CallRecord& w : h.calls) {
    if (w.kind != Procedure::kWait || w.open()) continue;
    bool begun = std::any_of(h.calls.begin(), h.calls.end(),
                             [&](const CallRecord& s) {
                               return s.kind == Procedure::kSignal &&
                                      s.start_seq < *w.end_seq;
                             });
    if (!begun) {
      out.push_back({ViolationKind::kWaitBeforeSignal,
                     {w.call_id},
                     {w.start_seq, *w.end_seq},
                     Describe(w) + " returned before any Signal began"});
    }
  }
  return out;
}

std::vector<Violation> CheckWaitFree(std::span<const History> histories,
                                     std::int64_t bound) {
  std::vector<Violation> out;
  for (const History& h : histories) {
    std::vector<std::int64_t> steps(h.calls.size(), 0);
    std::vector<std::uint64_t> last(h.calls.size(), 0);
    for (const Event& e : h.events) {
      ++steps.at(e.call_id);
      last[e.call_id] = e.seq;
    }
    for (const CallRecord& c : h.calls) {
      if (steps[c.call_id] > bound) {
        out.push_back({ViolationKind::kWaitFreeBudget,
                       {c.call_id},
                       {c.start_seq, last[c.call_id]},
                       Describe(c) + " took " +
                           std::to_string(steps[c.call_id]) +
                           " steps, bound " + std::to_string(bound)});
      }
    }
  }
  return out;
}

AmortizedResult CheckAmortized(const History& h, std::int64_t c,
                               CostModel model) {
  RmrLedger ledger = FoldLedger(h.events, h.num_procs);
  AmortizedResult r;
  r.total = ledger.totals().rmr(model);
  r.k = static_cast<std::int64_t>(ledger.participants().size());
  r.pass = r.total <= c * r.k;
  return r;
}

bool HasSafetyViolation(std::span<const Violation> violations) {
  return std::any_of(violations.begin(), violations.end(),
                     [](const Violation& v) {
                       return v.kind != ViolationKind::kHarnessMisuse;
                     });
}

}  // namespace rmrsim
