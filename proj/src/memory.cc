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

#include "rmrsim/memory.h"

#include <algorithm>
#include <utility>

namespace rmrsim {

std::string_view OpKindName(OpKind kind) {
  switch (kind) {
    case OpKind::kRead:
      return "READ";
    case OpKind::kWrite:
      return "WRITE";
    case OpKind::kCas:
      return "CAS";
    case OpKind::kLl:
      return "LL";
    case OpKind::kSc:
      return "SC";
    case OpKind::kFai:
      return "FAI";
    case OpKind::kFas:
      return "FAS";
    case OpKind::kTas:
      return "TAS";
  }
  return "?";
}

Memory::Memory(int num_procs) : num_procs_(num_procs) {
  if (num_procs < 1) {
    throw ConfigError("process count must be at least 1");
  }
}

LocId Memory::Alloc(std::string name, ProcId home, Word init) {
  if (home < 1 || home > num_procs_) {
    throw ConfigError("location '" + name + "' has home p" +
                      std::to_string(home) + " outside 1.." +
                      std::to_string(num_procs_));
  }
  if (by_name_.contains(name)) {
    throw ConfigError("duplicate location name '" + name + "'");
  }
  LocId id(static_cast<std::uint32_t>(locations_.size()));
  by_name_.emplace(name, id);
  locations_.push_back(Location{id, std::move(name), home, init});
  last_writer_.push_back(kNoProc);
  links_.emplace_back();
  return id;
}

const Location& Memory::location(LocId loc) const {
  if (loc.index() >= locations_.size()) {
    throw ConfigError("unallocated location #" + std::to_string(loc.index()));
  }
  return locations_[loc.index()];
}

std::optional<LocId> Memory::Find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

ProcId Memory::last_writer(LocId loc) const {
  location(loc);
  return last_writer_[loc.index()];
}

bool Memory::linked(ProcId proc, LocId loc) const {
  location(loc);
  const auto& l = links_[loc.index()];
  return std::find(l.begin(), l.end(), proc) != l.end();
}

void Memory::CheckProc(ProcId proc) const {
  if (proc < 1 || proc > num_procs_) {
    throw ConfigError("process p" + std::to_string(proc) + " outside 1.." +
                      std::to_string(num_procs_));
  }
}

void Memory::Store(ProcId proc, LocId loc, Word v) {
  locations_[loc.index()].value = v;
  last_writer_[loc.index()] = proc;
  links_[loc.index()].clear();
}

Event Memory::Apply(ProcId proc, const PrimitiveOp& op, LocId loc,
                    std::uint64_t call_id) {
  CheckProc(proc);
  const Location& target = location(loc);
  Event e;
  e.seq = next_seq_++;
  e.proc = proc;
  e.op = op;
  e.loc = loc;
  e.home = target.home;
  e.call_id = call_id;
  e.writer_before = last_writer_[loc.index()];

  const Word old = target.value;
  auto write = [&](Word v) {
    Store(proc, loc, v);
    e.value_written = v;
  };

  switch (op.kind) {
    case OpKind::kRead:
      e.value_read = old;
      break;
    case OpKind::kWrite:
      write(op.operand);
      break;
    case OpKind::kCas:
      e.value_read = old;
      e.success = old == op.expected;
      if (e.success) write(op.operand);
      break;
    case OpKind::kLl: {
      e.value_read = old;
      auto& l = links_[loc.index()];
      if (std::find(l.begin(), l.end(), proc) == l.end()) l.push_back(proc);
      break;
    }
    case OpKind::kSc: {
      auto& l = links_[loc.index()];
      auto it = std::find(l.begin(), l.end(), proc);
      e.success = it != l.end();
      if (e.success) {
        write(op.operand);
      }
      break;
    }
    case OpKind::kFai:
      e.value_read = old;
      write(old + 1);
      break;
    case OpKind::kFas:
      e.value_read = old;
      write(op.operand);
      break;
    case OpKind::kTas:
      e.value_read = old;
      e.success = old == 0;
      if (e.success) write(1);
      break;
  }
  return e;
}

MemoryImage Memory::Image() const {
  MemoryImage image;
  image.values.reserve(locations_.size());
  for (const auto& l : locations_) image.values.push_back(l.value);
  image.last_writers = last_writer_;
  image.links = links_;
  for (auto& l : image.links) std::sort(l.begin(), l.end());
  return image;
}

ProcId LastWriter(LocId loc, std::span<const Event> prefix) {
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    if (it->loc == loc && it->wrote()) return it->proc;
  }
  return kNoProc;
}

}  // namespace rmrsim
