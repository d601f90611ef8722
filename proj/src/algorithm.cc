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

#include "rmrsim/algorithm.h"

#include <algorithm>
#include <utility>

namespace rmrsim {

std::string_view ProcedureName(Procedure proc) {
  switch (proc) {
    case Procedure::kPoll:
      return "Poll";
    case Procedure::kSignal:
      return "Signal";
    case Procedure::kWait:
      return "Wait";
  }
  return "?";
}

bool Allows(PrimitiveSet set, OpKind kind) {
  switch (kind) {
    case OpKind::kRead:
    case OpKind::kWrite:
      return set & kPrimReadWrite;
    case OpKind::kCas:
      return set & kPrimCas;
    case OpKind::kLl:
    case OpKind::kSc:
      return set & kPrimLlSc;
    case OpKind::kFai:
      return set & kPrimFai;
    case OpKind::kFas:
      return set & kPrimFas;
    case OpKind::kTas:
      return set & kPrimTas;
  }
  return false;
}

Algorithm::Algorithm(std::string name, int num_procs, PrimitiveSet primitives)
    : name_(std::move(name)), num_procs_(num_procs), primitives_(primitives) {
  if (num_procs < 1) throw ConfigError("process count must be at least 1");
}

Memory Algorithm::MakeMemory() const {
  Memory memory(num_procs_);
  for (const auto& spec : layout_) memory.Alloc(spec.name, spec.home, spec.init);
  return memory;
}

LocId Algorithm::AddLocation(std::string name, ProcId home, Word init) {
  if (home < 1 || home > num_procs_) {
    throw ConfigError(name_ + ": home p" + std::to_string(home) + " of " +
                      name + " outside 1.." + std::to_string(num_procs_));
  }
  LocId id(static_cast<std::uint32_t>(layout_.size()));
  layout_.push_back({std::move(name), home, init});
  return id;
}

void Algorithm::CheckProc(ProcId p) const {
  if (p < 1 || p > num_procs_) {
    throw PreconditionError(name_ + ": process p" + std::to_string(p) +
                            " outside 1.." + std::to_string(num_procs_));
  }
}

void Algorithm::CheckRoles(std::span<const ProcId> pollers,
                           std::span<const ProcId> signalers) const {
  for (ProcId p : pollers) CheckCall(p, Procedure::kPoll);
  for (ProcId p : signalers) CheckCall(p, Procedure::kSignal);
}

void Algorithm::CheckCall(ProcId self, Procedure proc) const {
  CheckProc(self);
  if (proc == Procedure::kWait) {
    throw PreconditionError(name_ + " has polling semantics; use " + name_ +
                            "+blocking for Wait");
  }
}

namespace {

// Register conventions shared by the DSM algorithms.
constexpr int kPolled = 0;  // first Poll completed
constexpr int kSlot = 1;
constexpr int kBound = 2;
constexpr int kIndex = 3;

// Mutant hook: the signaler's write of a waiter's flag becomes a read.
PrimitiveOp FlagWrite(bool omit) {
  return omit ? PrimitiveOp::Read() : PrimitiveOp::Write(1);
}

class CcFlag final : public Algorithm {
 public:
  explicit CcFlag(const AlgorithmConfig& c)
      : Algorithm("cc_flag", c.num_procs, kPrimReadWrite),
        omit_(c.omit_remote_write),
        b_(AddLocation("B", c.globals_home, 0)) {}

  Action Next(ProcId self, Procedure proc, LocalState& st,
              const StepResult* last) const override {
    CheckCall(self, proc);
    if (proc == Procedure::kPoll) {
      if (st.pc == 0) {
        st.pc = 1;
        return Action::Access(PrimitiveOp::Read(), b_);
      }
      return Action::Return(*last->value_read);
    }
    if (st.pc == 0) {
      st.pc = 1;
      return Action::Access(FlagWrite(omit_), b_);
    }
    return Action::Return(0);
  }

 private:
  bool omit_;
  LocId b_;
};

class DsmSingleWaiter final : public Algorithm {
 public:
  explicit DsmSingleWaiter(const AlgorithmConfig& c)
      : Algorithm("dsm_single_waiter", c.num_procs, kPrimReadWrite),
        omit_(c.omit_remote_write),
        w_(AddLocation("W", c.globals_home, kNil)),
        s_(AddLocation("S", c.globals_home, 0)) {
    for (ProcId i = 1; i <= c.num_procs; ++i) {
      v_.push_back(AddLocation("V[" + std::to_string(i) + "]", i, 0));
    }
  }

  int max_waiters() const override { return 1; }

  void CheckRoles(std::span<const ProcId> pollers,
                  std::span<const ProcId> signalers) const override {
    if (pollers.size() > 1) {
      throw PreconditionError(
          "dsm_single_waiter allows at most one distinct waiter, got " +
          std::to_string(pollers.size()));
    }
    Algorithm::CheckRoles(pollers, signalers);
  }

  Action Next(ProcId self, Procedure proc, LocalState& st,
              const StepResult* last) const override {
    CheckCall(self, proc);
    if (proc == Procedure::kPoll) {
      switch (st.pc) {
        case 0:
          if (st.reg[kPolled] == 0) {
            st.pc = 1;
            return Action::Access(PrimitiveOp::Write(self), w_);
          }
          st.pc = 3;
          return Action::Access(PrimitiveOp::Read(), v(self));
        case 1:
          st.pc = 2;
          return Action::Access(PrimitiveOp::Read(), s_);
        case 2:
          st.reg[kPolled] = 1;
          return Action::Return(*last->value_read);
        default:
          return Action::Return(*last->value_read);
      }
    }
    switch (st.pc) {
      case 0:
        st.pc = 1;
        return Action::Access(PrimitiveOp::Write(1), s_);
      case 1:
        st.pc = 2;
        return Action::Access(PrimitiveOp::Read(), w_);
      case 2: {
        Word j = *last->value_read;
        if (j == kNil) return Action::Return(0);
        st.pc = 3;
        return Action::Access(FlagWrite(omit_), v(static_cast<ProcId>(j)));
      }
      default:
        return Action::Return(0);
    }
  }

 private:
  LocId v(ProcId p) const { return v_.at(p - 1); }

  bool omit_;
  LocId w_;
  LocId s_;
  std::vector<LocId> v_;
};

class DsmFixedWaiters final : public Algorithm {
 public:
  DsmFixedWaiters(const AlgorithmConfig& c, bool terminating)
      : Algorithm(terminating ? "dsm_fixed_waiters_term" : "dsm_fixed_waiters",
                  c.num_procs, kPrimReadWrite),
        terminating_(terminating),
        omit_(c.omit_remote_write),
        waiters_(c.waiters) {
    if (waiters_.empty()) {
      for (ProcId i = 1; i <= c.num_procs; ++i) {
        if (i != c.signaler) waiters_.push_back(i);
      }
    }
    std::sort(waiters_.begin(), waiters_.end());
    waiters_.erase(std::unique(waiters_.begin(), waiters_.end()),
                   waiters_.end());
    if (waiters_.empty()) throw ConfigError(name() + ": empty waiter set");
    for (ProcId w : waiters_) {
      if (w < 1 || w > c.num_procs) {
        throw ConfigError(name() + ": waiter p" + std::to_string(w) +
                          " outside 1.." + std::to_string(c.num_procs));
      }
    }
    for (ProcId i = 1; i <= c.num_procs; ++i) {
      v_.push_back(AddLocation("V[" + std::to_string(i) + "]", i, 0));
    }
    if (terminating_) {
      for (ProcId i = 1; i <= c.num_procs; ++i) {
        p_.push_back(
            AddLocation("P[" + std::to_string(i) + "]", c.globals_home, 0));
      }
    }
  }

  const std::vector<ProcId>& waiters() const { return waiters_; }

  void CheckCall(ProcId self, Procedure proc) const override {
    Algorithm::CheckCall(self, proc);
    if (proc == Procedure::kPoll &&
        !std::binary_search(waiters_.begin(), waiters_.end(), self)) {
      throw PreconditionError(name() + ": p" + std::to_string(self) +
                              " is not one of the fixed waiters");
    }
  }

  Action Next(ProcId self, Procedure proc, LocalState& st,
              const StepResult* last) const override {
    CheckCall(self, proc);
    return proc == Procedure::kPoll ? NextPoll(self, st, last)
                                    : NextSignal(self, st, last);
  }

 private:
  Action NextPoll(ProcId self, LocalState& st, const StepResult* last) const {
    switch (st.pc) {
      case 0:
        if (terminating_ && st.reg[kPolled] == 0) {
          st.pc = 1;
          return Action::Access(PrimitiveOp::Write(1), p_.at(self - 1));
        }
        st.pc = 2;
        return Action::Access(PrimitiveOp::Read(), v_.at(self - 1));
      case 1:
        st.reg[kPolled] = 1;
        st.pc = 2;
        return Action::Access(PrimitiveOp::Read(), v_.at(self - 1));
      default:
        return Action::Return(*last->value_read);
    }
  }

  Action NextSignal(ProcId self, LocalState& st,
                    const StepResult* last) const {
    const Word n = static_cast<Word>(waiters_.size());
    Word& idx = st.reg[kIndex];
    for (;;) {
      switch (st.pc) {
        case 0:
          idx = 0;
          st.pc = terminating_ ? 10 : 20;
          continue;
        // Wait until every other waiter has announced participation.
        case 10:
          while (idx < n && waiters_[idx] == self) ++idx;
          if (idx < n) {
            st.pc = 11;
            return Action::Access(PrimitiveOp::Read(),
                                  p_.at(waiters_[idx] - 1));
          }
          idx = 0;
          st.pc = 20;
          continue;
        case 11:
          if (*last->value_read != 0) {
            ++idx;
            st.pc = 10;
            continue;
          }
          return Action::Access(PrimitiveOp::Read(), p_.at(waiters_[idx] - 1));
        case 20:
          if (idx < n) {
            st.pc = 21;
            ProcId j = waiters_[idx];
            return Action::Access(FlagWrite(omit_ && j != self),
                                  v_.at(j - 1));
          }
          return Action::Return(0);
        case 21:
          ++idx;
          st.pc = 20;
          continue;
        default:
          throw SimError(name() + ": bad Signal pc");
      }
    }
  }

  bool terminating_;
  bool omit_;
  std::vector<ProcId> waiters_;
  std::vector<LocId> v_;
  std::vector<LocId> p_;
};

class DsmRegistration final : public Algorithm {
 public:
  explicit DsmRegistration(const AlgorithmConfig& c)
      : Algorithm("dsm_registration", c.num_procs, kPrimReadWrite),
        omit_(c.omit_remote_write),
        signaler_(c.signaler) {
    CheckProc(signaler_);
    s_ = AddLocation("S", signaler_, 0);
    for (ProcId i = 1; i <= c.num_procs; ++i) {
      r_.push_back(AddLocation("R[" + std::to_string(i) + "]", signaler_, 0));
    }
    for (ProcId i = 1; i <= c.num_procs; ++i) {
      v_.push_back(AddLocation("V[" + std::to_string(i) + "]", i, 0));
    }
  }

  std::optional<ProcId> designated_signaler() const override {
    return signaler_;
  }

  void CheckCall(ProcId self, Procedure proc) const override {
    Algorithm::CheckCall(self, proc);
    if (proc == Procedure::kSignal && self != signaler_) {
      throw PreconditionError("dsm_registration: only p" +
                              std::to_string(signaler_) +
                              " may Signal, not p" + std::to_string(self));
    }
  }

  Action Next(ProcId self, Procedure proc, LocalState& st,
              const StepResult* last) const override {
    CheckCall(self, proc);
    if (proc == Procedure::kPoll) {
      switch (st.pc) {
        case 0:
          if (st.reg[kPolled] == 0) {
            st.pc = 1;
            return Action::Access(PrimitiveOp::Write(1), r_.at(self - 1));
          }
          st.pc = 3;
          return Action::Access(PrimitiveOp::Read(), v_.at(self - 1));
        case 1:
          st.pc = 2;
          return Action::Access(PrimitiveOp::Read(), s_);
        case 2:
          st.reg[kPolled] = 1;
          return Action::Return(*last->value_read);
        default:
          return Action::Return(*last->value_read);
      }
    }
    const Word n = num_procs();
    Word& i = st.reg[kIndex];
    for (;;) {
      switch (st.pc) {
        case 0:
          i = 1;
          st.pc = 10;
          return Action::Access(PrimitiveOp::Write(1), s_);
        case 10:
          if (i > n) return Action::Return(0);
          st.pc = 11;
          return Action::Access(PrimitiveOp::Read(), r_.at(i - 1));
        case 11:
          if (*last->value_read != 0) {
            st.pc = 12;
            return Action::Access(FlagWrite(omit_ && i != self),
                                  v_.at(i - 1));
          }
          ++i;
          st.pc = 10;
          continue;
        case 12:
          ++i;
          st.pc = 10;
          continue;
        default:
          throw SimError("dsm_registration: bad Signal pc");
      }
    }
  }

 private:
  bool omit_;
  ProcId signaler_;
  LocId s_;
  std::vector<LocId> r_;
  std::vector<LocId> v_;
};

class DsmQueue final : public Algorithm {
 public:
  explicit DsmQueue(const AlgorithmConfig& c)
      : Algorithm("dsm_queue", c.num_procs, kPrimReadWrite | kPrimFai),
        omit_(c.omit_remote_write) {
    g_ = AddLocation("G", c.globals_home, 0);
    t_ = AddLocation("T", c.globals_home, 0);
    for (int s = 0; s < c.num_procs; ++s) {
      q_.push_back(
          AddLocation("Q[" + std::to_string(s) + "]", c.globals_home, kNil));
    }
    for (ProcId i = 1; i <= c.num_procs; ++i) {
      v_.push_back(AddLocation("V[" + std::to_string(i) + "]", i, 0));
    }
  }

  Action Next(ProcId self, Procedure proc, LocalState& st,
              const StepResult* last) const override {
    CheckCall(self, proc);
    if (proc == Procedure::kPoll) {
      switch (st.pc) {
        case 0:
          if (st.reg[kPolled] == 0) {
            st.pc = 1;
            return Action::Access(PrimitiveOp::Fai(), t_);
          }
          st.pc = 5;
          return Action::Access(PrimitiveOp::Read(), v_.at(self - 1));
        case 1: {
          Word slot = *last->value_read;
          if (slot < 0 || slot >= num_procs()) {
            throw CapacityError("dsm_queue: tail " + std::to_string(slot) +
                                " exceeds capacity " +
                                std::to_string(num_procs()));
          }
          st.reg[kSlot] = slot;
          st.pc = 2;
          return Action::Access(PrimitiveOp::Write(self), q_.at(slot));
        }
        case 2:
          st.pc = 3;
          return Action::Access(PrimitiveOp::Read(), g_);
        case 3:
          st.reg[kPolled] = 1;
          return Action::Return(*last->value_read);
        default:
          return Action::Return(*last->value_read);
      }
    }
    Word& bound = st.reg[kBound];
    Word& idx = st.reg[kIndex];
    for (;;) {
      switch (st.pc) {
        case 0:
          st.pc = 1;
          return Action::Access(PrimitiveOp::Write(1), g_);
        case 1:
          st.pc = 2;
          return Action::Access(PrimitiveOp::Read(), t_);
        case 2:
          bound = std::min<Word>(*last->value_read, num_procs());
          idx = 0;
          st.pc = 10;
          continue;
        case 10:
          if (idx >= bound) return Action::Return(0);
          st.pc = 11;
          return Action::Access(PrimitiveOp::Read(), q_.at(idx));
        case 11: {
          Word j = *last->value_read;
          if (j == kNil) {
            ++idx;
            st.pc = 10;
            continue;
          }
          st.pc = 12;
          return Action::Access(FlagWrite(omit_ && j != self),
                                v_.at(j - 1));
        }
        case 12:
          ++idx;
          st.pc = 10;
          continue;
        default:
          throw SimError("dsm_queue: bad Signal pc");
      }
    }
  }

 private:
  bool omit_;
  LocId g_;
  LocId t_;
  std::vector<LocId> q_;
  std::vector<LocId> v_;
};

class Blocking final : public Algorithm {
 public:
  explicit Blocking(AlgorithmPtr inner)
      : Algorithm(inner->name() + "+blocking", inner->num_procs(),
                  inner->primitives()),
        inner_(std::move(inner)) {
    AdoptLayout(*inner_);
  }

  std::optional<ProcId> designated_signaler() const override {
    return inner_->designated_signaler();
  }
  int max_waiters() const override { return inner_->max_waiters(); }

  void CheckRoles(std::span<const ProcId> pollers,
                  std::span<const ProcId> signalers) const override {
    inner_->CheckRoles(pollers, signalers);
  }

  void CheckCall(ProcId self, Procedure proc) const override {
    inner_->CheckCall(self,
                      proc == Procedure::kWait ? Procedure::kPoll : proc);
  }

  Action Next(ProcId self, Procedure proc, LocalState& st,
              const StepResult* last) const override {
    if (proc != Procedure::kWait) return inner_->Next(self, proc, st, last);
    Action a = inner_->Next(self, Procedure::kPoll, st, last);
    while (!a.is_access()) {
      if (a.response != 0) return Action::Return(1);
      st.pc = 0;
      a = inner_->Next(self, Procedure::kPoll, st, nullptr);
      if (!a.is_access()) {
        throw SimError(name() + ": Poll returned without taking a step");
      }
    }
    return a;
  }

 private:
  AlgorithmPtr inner_;
};

constexpr std::string_view kBlockingSuffix = "+blocking";

}  // namespace

AlgorithmPtr MakeCcFlag(const AlgorithmConfig& config) {
  return std::make_shared<CcFlag>(config);
}

AlgorithmPtr MakeDsmSingleWaiter(const AlgorithmConfig& config) {
  return std::make_shared<DsmSingleWaiter>(config);
}

AlgorithmPtr MakeDsmFixedWaiters(const AlgorithmConfig& config,
                                 bool terminating) {
  return std::make_shared<DsmFixedWaiters>(config, terminating);
}

AlgorithmPtr MakeDsmRegistration(const AlgorithmConfig& config) {
  return std::make_shared<DsmRegistration>(config);
}

AlgorithmPtr MakeDsmQueue(const AlgorithmConfig& config) {
  return std::make_shared<DsmQueue>(config);
}

AlgorithmPtr MakeBlocking(AlgorithmPtr inner) {
  return std::make_shared<Blocking>(std::move(inner));
}

const std::vector<std::string>& AlgorithmNames() {
  static const std::vector<std::string> names = {
      "cc_flag",          "dsm_single_waiter", "dsm_fixed_waiters",
      "dsm_fixed_waiters_term", "dsm_registration", "dsm_queue",
  };
  return names;
}

bool IsBlockingName(std::string_view name) {
  return name.ends_with(kBlockingSuffix);
}

AlgorithmPtr MakeAlgorithm(std::string_view name,
                           const AlgorithmConfig& config) {
  if (IsBlockingName(name)) {
    name.remove_suffix(kBlockingSuffix.size());
    return MakeBlocking(MakeAlgorithm(name, config));
  }
  if (name == "cc_flag") return MakeCcFlag(config);
  if (name == "dsm_single_waiter") return MakeDsmSingleWaiter(config);
  if (name == "dsm_fixed_waiters") return MakeDsmFixedWaiters(config, false);
  if (name == "dsm_fixed_waiters_term") {
    return MakeDsmFixedWaiters(config, true);
  }
  if (name == "dsm_registration") return MakeDsmRegistration(config);
  if (name == "dsm_queue") return MakeDsmQueue(config);
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

}  // namespace rmrsim
