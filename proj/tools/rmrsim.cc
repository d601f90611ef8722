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

// rmrsim: run, check, adversary and sweep front end.
//
//   rmrsim run --algo cc_flag --n 8 --schedule random --seed 7
//   rmrsim check --algo dsm_queue --n 3 --depth 30
//   rmrsim adversary --algo dsm_queue --W 64
//   rmrsim sweep --algo dsm_queue,dsm_registration --W 8,16,32 --format csv

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rmrsim/experiments.h"

namespace {

using rmrsim::CommandResult;
using rmrsim::ExperimentConfig;

// "3" is a count; "2,3" or "2," lists ids.
void ParseWaiters(const std::string& text, ExperimentConfig& config) {
  if (text.find(',') == std::string::npos) {
    config.waiter_count = std::stoi(text);
    return;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) config.waiter_ids.push_back(std::stoi(item));
  }
}

void AddCommon(CLI::App* cmd, ExperimentConfig& config, std::string& waiters,
               std::string& out) {
  cmd->add_option("--algo", config.algorithm,
                  "Algorithm name, optionally with +blocking")
      ->capture_default_str();
  cmd->add_option("--model", config.model, "dsm, cc, both or auto")
      ->check(CLI::IsMember({"dsm", "cc", "both", "auto"}))
      ->capture_default_str();
  cmd->add_option("--n", config.n, "Process count")->capture_default_str();
  cmd->add_option("--waiters", waiters, "Waiter count, or ids as 2,3");
  cmd->add_option("--schedule", config.schedule,
                  "rr, random or explicit:P,P,...")
      ->capture_default_str();
  cmd->add_option("--seed", config.seed, "Seed for random schedules")
      ->capture_default_str();
  cmd->add_option("--budget", config.budget, "Step budget")
      ->envname("RMRSIM_BUDGET")
      ->capture_default_str();
  cmd->add_option("--c", config.c, "Amortized constant; 0 disables");
  cmd->add_option("--W", config.w_list, "Waiter counts, comma separated")
      ->delimiter(',');
  cmd->add_option("--out", out, "Output file (default stdout)");
  cmd->add_option("--format", config.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--polls", config.polls,
                  "Polls per waiter (default unbounded; 3 for check)");
  cmd->add_option("--depth", config.depth, "Enumeration depth")
      ->capture_default_str();
  cmd->add_option("--max-histories", config.max_histories,
                  "Enumeration history budget")
      ->capture_default_str();
  cmd->add_option("--signaler", config.signaler, "Signaler id (0 = auto)");
  cmd->add_option("--globals-home", config.globals_home,
                  "Home process of shared globals")
      ->capture_default_str();
  cmd->add_flag("--mutant", config.mutant,
                "Signal skips its remote flag writes");
  cmd->add_flag("--erase", config.erase,
                "Erase waiters the signaler is about to discover");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared-memory signaling simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI config; flags win");

  ExperimentConfig config;
  std::string waiters;
  std::string out;
  CLI::App* run = app.add_subcommand("run", "Simulate one schedule");
  CLI::App* check = app.add_subcommand("check", "Enumerate all schedules");
  CLI::App* adversary =
      app.add_subcommand("adversary", "Run the separation drill");
  CLI::App* sweep = app.add_subcommand("sweep", "Drill over a W list");
  for (CLI::App* cmd : {run, check, adversary, sweep}) {
    AddCommon(cmd, config, waiters, out);
    cmd->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : rmrsim::kExitUsage;
  }

  CommandResult result;
  try {
    if (!waiters.empty()) ParseWaiters(waiters, config);
    if (adversary->parsed() && adversary->count("--W") == 0) {
      config.w_list = {64};
    }
    if (run->parsed()) {
      result = rmrsim::CmdRun(config);
    } else if (check->parsed()) {
      result = rmrsim::CmdCheck(config);
    } else if (adversary->parsed()) {
      result = rmrsim::CmdAdversary(config);
    } else {
      result = rmrsim::CmdSweep(config);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "rmrsim: bad number: " << e.what() << "\n";
    return rmrsim::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "rmrsim: " << e.what() << "\n";
    return rmrsim::ExitCodeFor(e);
  }

  for (const std::string& line : result.violations) std::cerr << line << "\n";
  if (out.empty()) {
    std::cout << result.output;
  } else {
    std::ofstream file(out);
    if (!file) {
      std::cerr << "rmrsim: cannot write " << out << "\n";
      return rmrsim::kExitUsage;
    }
    file << result.output;
  }
  return result.exit_code;
}
