// Copyright 2026 The fleetreloc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "cli/commands.h"
#include "cli/config.h"

namespace {

namespace cli = fleetreloc::cli;

struct Common {
  std::string config;
  std::vector<std::string> sets;
  long seed = -1;
  std::string out_dir;
  int workers = 0;
  long time_limit_ms = -1;
  long node_limit = -1;
};

void AddCommon(CLI::App* sub, Common* c) {
  sub->add_option("--config", c->config, "Config file (TOML-style key = value)");
  sub->add_option("--set", c->sets, "Override one key, e.g. --set sim.pooling_ratio=2");
  sub->add_option("--seed", c->seed, "Base seed");
  sub->add_option("--out-dir", c->out_dir, "Output directory");
  sub->add_option("--workers", c->workers, "Episodes run in parallel");
  sub->add_option("--time-limit-ms", c->time_limit_ms, "MPC solver budget per decision");
  sub->add_option("--node-limit", c->node_limit, "MPC branch-and-bound node budget, 0 = none");
}

// File first, then --set, then the dedicated flags.
cli::Config Resolve(const Common& c) {
  cli::Config cfg = cli::Config::Defaults();
  if (!c.config.empty()) cfg.MergeFile(c.config);
  for (const std::string& kv : c.sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) throw cli::UsageError("--set expects key=value, got " + kv);
    cfg.Set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.seed >= 0) cfg.Set("run.seed", std::to_string(c.seed));
  if (!c.out_dir.empty()) cfg.Set("run.out_dir", "\"" + c.out_dir + "\"");
  if (c.workers > 0) cfg.Set("run.workers", std::to_string(c.workers));
  if (c.time_limit_ms >= 0) cfg.Set("run.time_limit_ms", std::to_string(c.time_limit_ms));
  if (c.node_limit >= 0) cfg.Set("run.node_limit", std::to_string(c.node_limit));
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fleet relocation experiments: MPC, learned and dispatcher-only policies"};
  app.require_subcommand(1);
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

  Common common;
  std::vector<std::string> files;
  bool print_config = false;
  CLI::App* simulate = app.add_subcommand("simulate", "Run policies over instances");
  CLI::App* harvest = app.add_subcommand("harvest", "Collect MPC training pairs");
  CLI::App* train = app.add_subcommand("train", "Fit the relocation model");
  CLI::App* evaluate = app.add_subcommand("evaluate", "Compare policies against the dispatcher");
  CLI::App* validate = app.add_subcommand("validate", "Lint instance or scenario files");
  for (CLI::App* sub : {simulate, harvest, train, evaluate, validate}) {
    AddCommon(sub, &common);
    sub->fallthrough();
    sub->add_flag("--print-config", print_config, "Print the resolved config first");
  }
  validate->add_option("files", files, "Instance or scenario JSON files");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    const cli::Config cfg = Resolve(common);
    if (print_config) std::cout << cfg.ToToml() << "\n";
    if (simulate->parsed()) return cli::RunSimulate(cfg, std::cout);
    if (harvest->parsed()) return cli::RunHarvest(cfg, std::cout);
    if (train->parsed()) return cli::RunTrain(cfg, std::cout);
    if (evaluate->parsed()) return cli::RunEvaluate(cfg, std::cout);
    std::vector<std::filesystem::path> paths(files.begin(), files.end());
    return cli::RunValidate(cfg, paths, std::cout);
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
