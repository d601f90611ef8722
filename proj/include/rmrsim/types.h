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

#ifndef RMRSIM_TYPES_H_
#define RMRSIM_TYPES_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace rmrsim {

// Process ids run 1..N. Zero doubles as "no process" and as the NIL word.
using ProcId = std::int32_t;
using Word = std::int64_t;

inline constexpr ProcId kNoProc = 0;
inline constexpr Word kNil = 0;

// Index of a shared location inside one simulation instance.
class LocId {
 public:
  constexpr LocId() = default;
  constexpr explicit LocId(std::uint32_t index) : index_(index) {}

  constexpr std::uint32_t index() const { return index_; }

  friend constexpr auto operator<=>(LocId, LocId) = default;

 private:
  std::uint32_t index_ = 0;
};

// Root of everything the simulator throws. Subclasses map onto the CLI exit
// code contract.
class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration: duplicate names, invalid homes, unknown algorithms.
class ConfigError : public SimError {
 public:
  using SimError::SimError;
};

// A role assignment or call violates an algorithm's stated precondition.
class PreconditionError : public SimError {
 public:
  using SimError::SimError;
};

// A bounded structure (the FAI queue) ran out of room.
class CapacityError : public SimError {
 public:
  using SimError::SimError;
};

// Exhaustive enumeration explored more histories than allowed.
class StateSpaceOverflow : public SimError {
 public:
  StateSpaceOverflow(const std::string& what, std::uint64_t explored)
      : SimError(what), explored_(explored) {}
  std::uint64_t explored() const { return explored_; }

 private:
  std::uint64_t explored_;
};

// The stability oracle hit its configuration bound without a verdict.
class UndecidedError : public SimError {
 public:
  using SimError::SimError;
};

// The adversary drill cannot be applied to this algorithm or configuration.
class DrillInapplicable : public SimError {
 public:
  using SimError::SimError;
};

// Call records that cannot describe a legal history.
class StructuralError : public SimError {
 public:
  using SimError::SimError;
};

// Replay after erasure diverged: the erasure validator let something through
// it should not have.
class SoundnessError : public SimError {
 public:
  using SimError::SimError;
};

}  // namespace rmrsim

template <>
struct std::hash<rmrsim::LocId> {
  std::size_t operator()(rmrsim::LocId id) const noexcept {
    return std::hash<std::uint32_t>{}(id.index());
  }
};

#endif  // RMRSIM_TYPES_H_
