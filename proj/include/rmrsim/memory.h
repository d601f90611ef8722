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

// Atomic shared memory. Every location lives in exactly one process's memory
// module (its "home"). Each primitive applied to a location is one atomic step
// and is reported as an Event.

#ifndef RMRSIM_MEMORY_H_
#define RMRSIM_MEMORY_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rmrsim/types.h"

namespace rmrsim {

enum class OpKind : std::uint8_t {
  kRead,
  kWrite,
  kCas,
  kLl,
  kSc,
  kFai,
  kFas,
  kTas,
};

std::string_view OpKindName(OpKind kind);

struct PrimitiveOp {
  OpKind kind = OpKind::kRead;
  // Value stored by WRITE, SC, FAS, and by CAS on success.
  Word operand = 0;
  // CAS comparand.
  Word expected = 0;

  static PrimitiveOp Read() { return {OpKind::kRead}; }
  static PrimitiveOp Write(Word v) { return {OpKind::kWrite, v}; }
  static PrimitiveOp Cas(Word expected, Word desired) {
    return {OpKind::kCas, desired, expected};
  }
  static PrimitiveOp Ll() { return {OpKind::kLl}; }
  static PrimitiveOp Sc(Word v) { return {OpKind::kSc, v}; }
  static PrimitiveOp Fai() { return {OpKind::kFai}; }
  static PrimitiveOp Fas(Word v) { return {OpKind::kFas, v}; }
  static PrimitiveOp Tas() { return {OpKind::kTas}; }

  // READ and LL never modify memory. Everything else is a nontrivial attempt,
  // whether or not it ends up changing the location.
  bool trivial() const { return kind == OpKind::kRead || kind == OpKind::kLl; }
  // True for ops whose response depends on the location's contents, i.e. the
  // issuing process learns something about the last writer.
  bool observes() const { return kind != OpKind::kWrite; }

  friend bool operator==(const PrimitiveOp&, const PrimitiveOp&) = default;
};

struct Location {
  LocId id;
  std::string name;
  ProcId home = kNoProc;
  Word value = 0;
};

struct Event {
  std::uint64_t seq = 0;
  ProcId proc = kNoProc;
  PrimitiveOp op;
  LocId loc;
  // Home module of `loc`, copied in so DSM classification needs nothing else.
  ProcId home = kNoProc;
  std::optional<Word> value_read;
  // Present iff the step modified memory.
  std::optional<Word> value_written;
  bool success = true;
  std::uint64_t call_id = 0;
  ProcId writer_before = kNoProc;

  bool wrote() const { return value_written.has_value(); }

  friend bool operator==(const Event&, const Event&) = default;
};

// Values plus LL link state. Equality is the determinism check used by
// replay.
struct MemoryImage {
  std::vector<Word> values;
  std::vector<ProcId> last_writers;
  std::vector<std::vector<ProcId>> links;

  friend bool operator==(const MemoryImage&, const MemoryImage&) = default;
};

class Memory {
 public:
  explicit Memory(int num_procs);

  int num_procs() const { return num_procs_; }
  std::size_t size() const { return locations_.size(); }

  // Throws ConfigError on a duplicate name or a home outside 1..N.
  LocId Alloc(std::string name, ProcId home, Word init);

  // Performs one atomic step and returns its record. The step counter backing
  // Event::seq advances by one per call.
  Event Apply(ProcId proc, const PrimitiveOp& op, LocId loc,
              std::uint64_t call_id = 0);

  const Location& location(LocId loc) const;
  Word value(LocId loc) const { return location(loc).value; }
  ProcId home(LocId loc) const { return location(loc).home; }
  std::optional<LocId> Find(std::string_view name) const;

  // Process of the most recent memory-modifying step on `loc`, or kNoProc.
  ProcId last_writer(LocId loc) const;

  bool linked(ProcId proc, LocId loc) const;

  std::uint64_t steps() const { return next_seq_; }

  MemoryImage Image() const;

 private:
  void CheckProc(ProcId proc) const;
  void Store(ProcId proc, LocId loc, Word v);

  int num_procs_;
  std::vector<Location> locations_;
  std::vector<ProcId> last_writer_;
  std::vector<std::vector<ProcId>> links_;
  std::unordered_map<std::string, LocId> by_name_;
  std::uint64_t next_seq_ = 0;
};

// Last writer of `loc` over an event prefix, computed from the log alone.
ProcId LastWriter(LocId loc, std::span<const Event> prefix);

}  // namespace rmrsim

#endif  // RMRSIM_MEMORY_H_
