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

#include "rmrsim/cost_model.h"

namespace rmrsim {

std::string_view CostModelName(CostModel model) {
  return model == CostModel::kDsm ? "dsm" : "cc";
}

bool CacheState::holds(ProcId proc, LocId loc) const {
  if (loc.index() >= rows_.size()) return false;
  const auto& row = rows_[loc.index()];
  return proc >= 0 && static_cast<std::size_t>(proc) < row.size() &&
         row[proc];
}

int CacheState::RemoteHolders(ProcId proc, LocId loc) const {
  if (loc.index() >= rows_.size()) return 0;
  const auto& row = rows_[loc.index()];
  int n = 0;
  for (std::size_t q = 0; q < row.size(); ++q) {
    if (row[q] && static_cast<ProcId>(q) != proc) ++n;
  }
  return n;
}

std::vector<LocId> CacheState::HeldBy(ProcId proc) const {
  std::vector<LocId> out;
  for (std::size_t l = 0; l < rows_.size(); ++l) {
    if (holds(proc, LocId(static_cast<std::uint32_t>(l)))) {
      out.emplace_back(static_cast<std::uint32_t>(l));
    }
  }
  return out;
}

std::size_t CacheState::size() const {
  std::size_t n = 0;
  for (const auto& row : rows_) {
    for (bool b : row) n += b;
  }
  return n;
}

std::vector<bool>& CacheState::Row(LocId loc) {
  if (loc.index() >= rows_.size()) rows_.resize(loc.index() + 1);
  auto& row = rows_[loc.index()];
  if (row.empty()) row.assign(num_procs_ + 1, false);
  return row;
}

void CacheState::Insert(ProcId proc, LocId loc) { Row(loc).at(proc) = true; }

void CacheState::InvalidateOthers(ProcId keeper, LocId loc) {
  auto& row = Row(loc);
  for (std::size_t q = 0; q < row.size(); ++q) {
    if (static_cast<ProcId>(q) != keeper) row[q] = false;
  }
}

Access ClassifyDsm(const Event& e) {
  return e.home == e.proc ? Access::kLocal : Access::kRmr;
}

Access ClassifyCc(const Event& e, CacheState& cache) {
  if (e.op.trivial()) {
    if (cache.holds(e.proc, e.loc)) return Access::kLocal;
    cache.Insert(e.proc, e.loc);
    return Access::kRmr;
  }
  cache.InvalidateOthers(e.proc, e.loc);
  cache.Insert(e.proc, e.loc);
  return Access::kRmr;
}

int CountMessages(const Event& e, const CacheState& cache_before,
                  MessageMode mode) {
  if (e.op.trivial()) return 0;
  if (mode == MessageMode::kBus) return 1;
  return cache_before.RemoteHolders(e.proc, e.loc);
}

ProcessCounters& ProcessCounters::operator+=(const ProcessCounters& o) {
  rmr_dsm += o.rmr_dsm;
  rmr_cc += o.rmr_cc;
  msg_bus += o.msg_bus;
  msg_dir += o.msg_dir;
  steps += o.steps;
  rmr_cc_read += o.rmr_cc_read;
  nontrivial += o.nontrivial;
  return *this;
}

RmrLedger::RmrLedger(int num_procs)
    : num_procs_(num_procs),
      counters_(num_procs + 1),
      participant_(num_procs + 1, false),
      finished_(num_procs + 1, false) {}

ProcessCounters RmrLedger::totals() const {
  ProcessCounters t;
  for (const auto& c : counters_) t += c;
  return t;
}

std::vector<ProcId> RmrLedger::participants() const {
  std::vector<ProcId> out;
  for (ProcId p = 1; p <= num_procs_; ++p) {
    if (participant_[p]) out.push_back(p);
  }
  return out;
}

std::vector<ProcId> RmrLedger::finished_set() const {
  std::vector<ProcId> out;
  for (ProcId p = 1; p <= num_procs_; ++p) {
    if (finished_[p]) out.push_back(p);
  }
  return out;
}

EventCost RmrLedger::Update(const Event& e, CacheState& cache) {
  EventCost cost;
  cost.msg_bus = CountMessages(e, cache, MessageMode::kBus);
  cost.msg_dir = CountMessages(e, cache, MessageMode::kIdealDirectory);
  cost.dsm = ClassifyDsm(e);
  cost.cc = ClassifyCc(e, cache);

  ProcessCounters& c = counters_.at(e.proc);
  c.steps += 1;
  c.rmr_dsm += cost.dsm == Access::kRmr;
  c.rmr_cc += cost.cc == Access::kRmr;
  c.msg_bus += cost.msg_bus;
  c.msg_dir += cost.msg_dir;
  if (e.op.trivial()) {
    c.rmr_cc_read += cost.cc == Access::kRmr;
  } else {
    c.nontrivial += 1;
  }
  participant_[e.proc] = true;
  return cost;
}

void RmrLedger::MarkFinished(ProcId proc) {
  // Fin(H) is a subset of Par(H): a process that never stepped is not
  // counted as finished.
  if (participant_.at(proc)) finished_[proc] = true;
}

RmrLedger FoldLedger(std::span<const Event> events, int num_procs) {
  RmrLedger ledger(num_procs);
  CacheState cache(num_procs);
  for (const Event& e : events) ledger.Update(e, cache);
  return ledger;
}

}  // namespace rmrsim
