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

// Signaling algorithms as passive transition functions.
//
// A procedure call is a small state machine over LocalState. The harness
// resets `pc` to zero at each invocation and then alternates: ask Next() for
// an action, perform the access, feed the StepResult back. Registers survive
// across calls and hold per-process persistent state (for example, whether
// the first Poll has already registered).

#ifndef RMRSIM_ALGORITHM_H_
#define RMRSIM_ALGORITHM_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rmrsim/memory.h"
#include "rmrsim/types.h"

namespace rmrsim {

enum class Procedure : std::uint8_t { kPoll, kSignal, kWait };

std::string_view ProcedureName(Procedure proc);

struct LocalState {
  std::int32_t pc = 0;
  std::array<Word, 4> reg{};

  friend bool operator==(const LocalState&, const LocalState&) = default;
};

struct StepResult {
  std::optional<Word> value_read;
  bool success = true;
};

struct Action {
  enum class Kind : std::uint8_t { kAccess, kReturn };

  Kind kind = Kind::kReturn;
  PrimitiveOp op;
  LocId loc;
  Word response = 0;

  static Action Access(PrimitiveOp op, LocId loc) {
    return {Kind::kAccess, op, loc, 0};
  }
  static Action Return(Word response) {
    return {Kind::kReturn, {}, {}, response};
  }
  bool is_access() const { return kind == Kind::kAccess; }
};

// Bit set over primitive families.
enum Primitive : std::uint8_t {
  kPrimReadWrite = 1 << 0,
  kPrimCas = 1 << 1,
  kPrimLlSc = 1 << 2,
  kPrimFai = 1 << 3,
  kPrimFas = 1 << 4,
  kPrimTas = 1 << 5,
};
using PrimitiveSet = std::uint8_t;

bool Allows(PrimitiveSet set, OpKind kind);

struct LocationSpec {
  std::string name;
  ProcId home = kNoProc;
  Word init = 0;
};

struct AlgorithmConfig {
  int num_procs = 0;
  // Home of the shared globals (B, W, S, G, T, Q, and the participation
  // flags of the terminating fixed-waiters variant).
  ProcId globals_home = 1;
  // Designated signaler for dsm_registration.
  ProcId signaler = 1;
  // Fixed waiter set for dsm_fixed_waiters. Empty means every process other
  // than `signaler`.
  std::vector<ProcId> waiters;
  // Checker self-test: Signal reads a waiter's flag instead of writing it.
  bool omit_remote_write = false;
};

class Algorithm {
 public:
  virtual ~Algorithm() = default;

  const std::string& name() const { return name_; }
  int num_procs() const { return num_procs_; }
  PrimitiveSet primitives() const { return primitives_; }
  const std::vector<LocationSpec>& layout() const { return layout_; }

  // Fresh memory with every location allocated in layout order, so that the
  // LocIds held by the algorithm are valid in it.
  Memory MakeMemory() const;

  // Next action of `self` inside a call of `proc`. `last` is null on the
  // first action of a call, else the result of the previous access.
  virtual Action Next(ProcId self, Procedure proc, LocalState& state,
                      const StepResult* last) const = 0;

  // Throws PreconditionError if a run in which `pollers` call Poll/Wait and
  // `signalers` call Signal is outside this algorithm's contract.
  virtual void CheckRoles(std::span<const ProcId> pollers,
                          std::span<const ProcId> signalers) const;

  // Throws PreconditionError if `self` may never invoke `proc`.
  virtual void CheckCall(ProcId self, Procedure proc) const;

  virtual std::optional<ProcId> designated_signaler() const {
    return std::nullopt;
  }
  virtual int max_waiters() const { return num_procs_; }
  // True for algorithms that only read and write.
  bool read_write_only() const { return primitives_ == kPrimReadWrite; }

 protected:
  Algorithm(std::string name, int num_procs, PrimitiveSet primitives);

  LocId AddLocation(std::string name, ProcId home, Word init);
  // Copies another algorithm's layout; used by wrappers.
  void AdoptLayout(const Algorithm& other) { layout_ = other.layout_; }
  void CheckProc(ProcId p) const;

 private:
  std::string name_;
  int num_procs_;
  PrimitiveSet primitives_;
  std::vector<LocationSpec> layout_;
};

using AlgorithmPtr = std::shared_ptr<const Algorithm>;

// Single Boolean B. Poll reads B, Signal writes B := 1.
AlgorithmPtr MakeCcFlag(const AlgorithmConfig& config);

// Globals W, S plus per-process V[i]. The first Poll publishes the caller's
// id in W, then reads S; later Polls read the local V[i]. Signal sets S, reads
// W, and sets V[W] if a waiter announced itself.
AlgorithmPtr MakeDsmSingleWaiter(const AlgorithmConfig& config);

// Poll reads the local V[i]; Signal sets V[j] for each fixed waiter j. The
// terminating variant first waits until every other waiter has set its
// participation flag P[j].
AlgorithmPtr MakeDsmFixedWaiters(const AlgorithmConfig& config,
                                 bool terminating);

// Waiters register in flags R[i] homed at the designated signaler, then read
// S. Signal sets S and scans R, setting V[i] for every registered waiter.
AlgorithmPtr MakeDsmRegistration(const AlgorithmConfig& config);

// FAI-backed arrival array. The first Poll reserves a slot in Q with FAI on
// T, writes its id there, then reads the global flag G. Signal sets G, reads
// T once, and sets V[Q[s]] for every filled slot.
AlgorithmPtr MakeDsmQueue(const AlgorithmConfig& config);

// Wait = Poll repeated until it returns true.
AlgorithmPtr MakeBlocking(AlgorithmPtr inner);

// Registry lookup. Base names are cc_flag, dsm_single_waiter,
// dsm_fixed_waiters, dsm_fixed_waiters_term, dsm_registration, dsm_queue; any
// of them may carry a "+blocking" suffix. Throws ConfigError on unknown names.
AlgorithmPtr MakeAlgorithm(std::string_view name,
                           const AlgorithmConfig& config);

const std::vector<std::string>& AlgorithmNames();

bool IsBlockingName(std::string_view name);

}  // namespace rmrsim

#endif  // RMRSIM_ALGORITHM_H_
