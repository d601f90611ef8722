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

// Visibility relations between processes, erasure of invisible processes,
// and the solo-stability oracle.

#ifndef RMRSIM_ANALYSIS_H_
#define RMRSIM_ANALYSIS_H_

#include <cstddef>
#include <cstdint>

#include "rmrsim/cost_model.h"
#include "rmrsim/simulation.h"
#include "rmrsim/types.h"

namespace rmrsim {

// p observed (read, LL, or read-modify-write) a location whose last writer
// at that moment was q.
bool Sees(const History& h, ProcId p, ProcId q);

// p accessed a location homed at q.
bool Touches(const History& h, ProcId p, ProcId q);

// True iff no other process sees p. p must be active in h.
bool ValidateErasure(const History& h, ProcId p);

// Replays the schedule without p's steps and certifies that every other
// process took exactly the same steps and got the same responses. Throws
// PreconditionError when p is not active or some process sees p, and
// SoundnessError if the replay diverges.
Simulation Erase(const Simulation& sim, ProcId p);

// Same steps apart from seq/call numbering. writer_before is compared only
// for steps that observe memory.
bool EquivalentSteps(const Event& a, const Event& b);

enum class Stability : std::uint8_t { kStable, kUnstable };

struct StabilityOptions {
  CostModel model = CostModel::kDsm;
  std::size_t max_configurations = 10'000;
  std::uint64_t max_steps = 1'000'000;
};

struct StabilityVerdict {
  Stability verdict = Stability::kUnstable;
  // Solo steps simulated before the verdict.
  std::uint64_t solo_steps = 0;
  std::size_t configurations = 0;
};

// Runs p solo on a copy of `sim`, calling Poll repeatedly. UNSTABLE on the
// first RMR under `model`. STABLE when p's configuration at a call boundary
// repeats: its registers, its last response, and every location it can read
// without an RMR (its own module under DSM, its cached copies under CC).
// p must be active and between calls. Throws UndecidedError when neither
// happens within the configured bounds.
StabilityVerdict CheckStability(const Simulation& sim, ProcId p,
                                const StabilityOptions& options = {});

}  // namespace rmrsim

#endif  // RMRSIM_ANALYSIS_H_
