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

#include "rmrsim/experiments.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "rmrsim/algorithm.h"
#include "rmrsim/checker.h"

namespace rmrsim {

namespace {

using Json = nlohmann::ordered_json;

std::vector<CostModel> ResolveModels(const std::string& model,
                                     const std::string& algorithm,
                                     bool drill) {
  if (model == "dsm") return {CostModel::kDsm};
  if (model == "cc") return {CostModel::kCc};
  if (model == "both") return {CostModel::kDsm, CostModel::kCc};
  if (model == "auto") {
    if (!drill) return {CostModel::kDsm, CostModel::kCc};
    return {algorithm == "cc_flag" ? CostModel::kCc : CostModel::kDsm};
  }
  throw ConfigError("unknown model '" + model + "' (dsm, cc, both, auto)");
}

std::string ModelLabel(const std::vector<CostModel>& models) {
  return models.size() == 1 ? std::string(CostModelName(models[0])) : "both";
}

std::vector<std::string> SplitAlgorithms(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw ConfigError("no algorithm given");
  return out;
}

Json Counters(const ProcessCounters& c, const std::vector<CostModel>& models) {
  bool dsm = std::count(models.begin(), models.end(), CostModel::kDsm) > 0;
  bool cc = std::count(models.begin(), models.end(), CostModel::kCc) > 0;
  Json j;
  if (dsm) j[kMetricRmrDsm] = c.rmr_dsm;
  if (cc) {
    j[kMetricRmrCc] = c.rmr_cc;
    j[kMetricMsgBus] = c.msg_bus;
    j[kMetricMsgDir] = c.msg_dir;
  }
  j[kMetricSteps] = c.steps;
  return j;
}

std::vector<Violation> CheckAll(const History& h) {
  std::vector<Violation> out = CheckPolling(h);
  std::vector<Violation> blocking = CheckBlocking(h);
  out.insert(out.end(), blocking.begin(), blocking.end());
  return out;
}

std::optional<Violation> Amortized(const History& h, std::int64_t c,
                                   CostModel model) {
  AmortizedResult r = CheckAmortized(h, c, model);
  if (r.pass) return std::nullopt;
  return Violation{ViolationKind::kAmortizedBudget,
                   {},
                   {},
                   std::to_string(r.total) + " " +
                       std::string(CostModelName(model)) + " RMRs exceed " +
                       std::to_string(c) + " x " + std::to_string(r.k) +
                       " participants"};
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

DrillConfig MakeDrill(const ExperimentConfig& config,
                      const std::string& algorithm, CostModel model, int w) {
  DrillConfig d;
  d.algorithm = algorithm;
  d.waiters = w;
  d.model = model;
  d.signaler = config.signaler;
  d.erase_on_discovery = config.erase;
  d.globals_home = config.globals_home;
  d.signal_budget = config.budget;
  return d;
}

std::string CsvRow(const SeparationReport& r) {
  char ratio[32];
  std::snprintf(ratio, sizeof(ratio), "%.4f",
                r.k == 0 ? 0.0 : static_cast<double>(r.total_rmr()) / r.k);
  std::ostringstream out;
  out << r.algorithm << ',' << CostModelName(r.model) << ',' << r.waiters
      << ',' << r.k << ',' << r.signaler_rmrs << ',' << r.total_rmr_dsm << ','
      << r.total_rmr_cc << ',' << r.msg_bus << ',' << r.msg_dir << ','
      << ratio << '\n';
  return out.str();
}

}  // namespace

Scenario BuildScenario(const ExperimentConfig& config, std::int64_t polls) {
  if (config.n < 1) throw ConfigError("--n must be at least 1");
  AlgorithmConfig ac;
  ac.num_procs = config.n;
  ac.globals_home = config.globals_home;
  ac.signaler = config.signaler == kNoProc ? 1 : config.signaler;
  ac.omit_remote_write = config.mutant;
  const ProcId signaler = ac.signaler;
  if (signaler < 1 || signaler > config.n) {
    throw ConfigError("signaler p" + std::to_string(signaler) +
                      " outside 1.." + std::to_string(config.n));
  }

  std::vector<ProcId> waiters = config.waiter_ids;
  if (waiters.empty()) {
    int count = config.waiter_count;
    if (count < 0) {
      count = std::min(config.n - 1,
                       MakeAlgorithm(config.algorithm, ac)->max_waiters());
    }
    if (count > config.n - 1) {
      throw ConfigError(std::to_string(count) + " waiters need n >= " +
                        std::to_string(count + 1));
    }
    for (ProcId p = 1; static_cast<int>(waiters.size()) < count; ++p) {
      if (p != signaler) waiters.push_back(p);
    }
  }
  std::sort(waiters.begin(), waiters.end());
  for (ProcId w : waiters) {
    if (w < 1 || w > config.n) {
      throw ConfigError("waiter p" + std::to_string(w) + " outside 1.." +
                        std::to_string(config.n));
    }
  }
  ac.waiters = waiters;

  Scenario scenario = Scenario::Make(MakeAlgorithm(config.algorithm, ac));
  const bool blocking = IsBlockingName(config.algorithm);
  Script wait = blocking ? WaitOnce() : PollUntilTrue(polls);
  scenario.scripts[signaler] = SignalOnce();
  for (ProcId w : waiters) {
    Script& s = scenario.scripts[w];
    s.insert(s.end(), wait.begin(), wait.end());
  }
  return scenario;
}

SchedulePolicy ParseSchedule(const std::string& spec, std::uint64_t seed,
                             std::uint64_t budget) {
  if (spec == "rr" || spec == "round_robin") {
    return SchedulePolicy::RoundRobin(budget);
  }
  if (spec == "random") return SchedulePolicy::Random(seed, budget);
  const std::string prefix = "explicit:";
  if (spec.rfind(prefix, 0) == 0) {
    std::vector<ProcId> sequence;
    std::stringstream in(spec.substr(prefix.size()));
    std::string item;
    while (std::getline(in, item, ',')) {
      try {
        sequence.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw ConfigError("bad process id '" + item + "' in schedule");
      }
    }
    SchedulePolicy policy = SchedulePolicy::Explicit(std::move(sequence));
    policy.budget = budget;
    return policy;
  }
  if (spec == "exhaustive") {
    throw ConfigError("exhaustive schedules are run by the check command");
  }
  throw ConfigError("unknown schedule '" + spec +
                    "' (rr, random, explicit:P,P,...)");
}

CommandResult CmdRun(const ExperimentConfig& config) {
  std::vector<CostModel> models =
      ResolveModels(config.model, config.algorithm, false);
  Scenario scenario =
      BuildScenario(config, config.polls < 0 ? kUnbounded : config.polls);
  SchedulePolicy policy =
      ParseSchedule(config.schedule, config.seed, config.budget);
  for (ProcId p : policy.sequence) {
    if (p < 1 || p > config.n) {
      throw ConfigError("schedule names p" + std::to_string(p) +
                        " outside 1.." + std::to_string(config.n));
    }
  }
  Simulation sim = Run(scenario, policy);
  const History& h = sim.history();

  std::vector<Violation> violations = CheckAll(h);
  if (config.c > 0) {
    for (CostModel m : models) {
      if (auto v = Amortized(h, config.c, m)) violations.push_back(*v);
    }
  }

  const RmrLedger& ledger = sim.ledger();
  Json record;
  record["algorithm"] = config.algorithm;
  record["model"] = ModelLabel(models);
  record["n"] = config.n;
  record["schedule"] = config.schedule;
  record["seed"] = config.seed;
  record["k"] = ledger.participants().size();
  record["incomplete"] = h.incomplete;
  Json per_process = Json::object();
  for (ProcId p = 1; p <= config.n; ++p) {
    per_process[std::to_string(p)] = Counters(ledger.of(p), models);
  }
  record["per_process"] = per_process;
  record["totals"] = Counters(ledger.totals(), models);
  Json vs = Json::array();
  CommandResult result;
  for (const Violation& v : violations) {
    vs.push_back(Json::parse(ToJsonLine(v)));
    result.violations.push_back(ToJsonLine(v));
  }
  record["violations"] = vs;
  result.output = Dump(record);
  result.exit_code = violations.empty() ? kExitClean : kExitViolation;
  return result;
}

CommandResult CmdCheck(const ExperimentConfig& config) {
  if (config.n > 4) {
    throw ConfigError("exhaustive checking is limited to n <= 4");
  }
  Scenario scenario = BuildScenario(config, config.polls < 0 ? 3 : config.polls);
  EnumerateOptions options;
  options.depth = config.depth;
  options.max_histories = config.max_histories;

  std::uint64_t pruned = 0;
  std::uint64_t violating = 0;
  std::uint64_t violation_count = 0;
  CommandResult result;
  std::uint64_t explored = 0;
  try {
    explored = Enumerate(scenario, options,
                         [&](const Simulation& sim, bool cut) {
                           pruned += cut;
                           std::vector<Violation> vs = CheckAll(sim.history());
                           if (vs.empty()) return;
                           ++violating;
                           violation_count += vs.size();
                           if (result.violations.size() < 10) {
                             for (const Violation& v : vs) {
                               result.violations.push_back(ToJsonLine(v));
                             }
                           }
                         });
  } catch (const StateSpaceOverflow& e) {
    throw StateSpaceOverflow(std::string(e.what()) + "; " +
                                 std::to_string(violation_count) +
                                 " violations among explored histories",
                             e.explored());
  }

  Json summary;
  summary["algorithm"] = config.algorithm;
  summary["n"] = config.n;
  summary["depth"] = config.depth;
  summary["histories_explored"] = explored;
  summary["pruned"] = pruned;
  summary["violating_histories"] = violating;
  summary["violations"] = violation_count;
  result.output = Dump(summary);
  result.exit_code = violation_count == 0 ? kExitClean : kExitViolation;
  return result;
}

CommandResult CmdAdversary(const ExperimentConfig& config) {
  if (config.w_list.size() != 1) {
    throw ConfigError("adversary takes a single --W value");
  }
  std::vector<CostModel> models =
      ResolveModels(config.model, config.algorithm, true);
  if (models.size() != 1) {
    throw ConfigError("adversary runs under one model; pick dsm or cc");
  }
  SeparationReport report = AdversarySeparation(
      MakeDrill(config, config.algorithm, models[0], config.w_list[0]));

  CommandResult result;
  for (ProcId w : report.stale_waiters) {
    Violation v{ViolationKind::kPollFalseAfterSignal,
                {},
                {},
                "p" + std::to_string(w) +
                    " still polls false after the Signal completed"};
    result.violations.push_back(ToJsonLine(v));
  }
  if (config.c > 0) {
    if (auto v = Amortized(report.history, config.c, report.model)) {
      result.violations.push_back(ToJsonLine(*v));
    }
  }
  if (config.format == "csv") {
    result.output = SweepCsvHeader() + CsvRow(report);
  } else {
    result.output = Dump(ToJson(report));
  }
  result.exit_code = result.violations.empty() ? kExitClean : kExitViolation;
  return result;
}

std::string SweepCsvHeader() {
  return "algorithm,model,W,k,signaler_rmrs,total_rmr_dsm,total_rmr_cc,"
         "msg_bus,msg_dir,ratio\n";
}

CommandResult CmdSweep(const ExperimentConfig& config) {
  if (config.w_list.empty()) throw ConfigError("empty --W list");
  for (int w : config.w_list) {
    if (w < 1) throw ConfigError("W values must be positive");
  }
  struct Point {
    std::string algorithm;
    CostModel model;
    int w;
  };
  std::vector<Point> points;
  for (const std::string& algo : SplitAlgorithms(config.algorithm)) {
    for (CostModel m : ResolveModels(config.model, algo, true)) {
      for (int w : config.w_list) points.push_back({algo, m, w});
    }
  }
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    return std::tie(a.algorithm, a.model, a.w) <
           std::tie(b.algorithm, b.model, b.w);
  });

  std::vector<std::optional<SeparationReport>> reports(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        reports[i] = AdversarySeparation(
            MakeDrill(config, points[i].algorithm, points[i].model,
                      points[i].w));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, points.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  CommandResult result;
  for (const auto& r : reports) {
    for (ProcId w : r->stale_waiters) {
      result.violations.push_back(ToJsonLine(
          {ViolationKind::kPollFalseAfterSignal,
           {},
           {},
           r->algorithm + " W=" + std::to_string(r->waiters) + ": p" +
               std::to_string(w) + " still polls false after the Signal"}));
    }
  }
  if (config.format == "csv") {
    result.output = SweepCsvHeader();
    for (const auto& r : reports) result.output += CsvRow(*r);
  } else {
    Json rows = Json::array();
    for (const auto& r : reports) rows.push_back(ToJson(*r));
    result.output = Dump(rows);
  }
  result.exit_code = result.violations.empty() ? kExitClean : kExitViolation;
  return result;
}

int ExitCodeFor(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) ||
      dynamic_cast<const PreconditionError*>(&e) ||
      dynamic_cast<const CapacityError*>(&e)) {
    return kExitUsage;
  }
  if (dynamic_cast<const StateSpaceOverflow*>(&e) ||
      dynamic_cast<const UndecidedError*>(&e)) {
    return kExitOverflow;
  }
  if (dynamic_cast<const DrillInapplicable*>(&e)) return kExitInapplicable;
  return kExitInternal;
}

}  // namespace rmrsim
