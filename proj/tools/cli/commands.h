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


// The experiment subcommands. Each returns the process exit code: 0 when every
// requested episode completed, 1 otherwise. Config problems throw UsageError;
// unreadable inputs throw Error.

#ifndef FLEETRELOC_TOOLS_CLI_COMMANDS_H_
#define FLEETRELOC_TOOLS_CLI_COMMANDS_H_

#include <filesystem>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "cli/config.h"
#include "fleetreloc/dataio.h"
#include "fleetreloc/simulator.h"

namespace fleetreloc::cli {

// Keys left out of the config echo; they do not affect any result.
const std::set<std::string>& EchoOmittedKeys();

SimConfig SimConfigFrom(const Config& cfg);
// Synthetic instances seeded run.seed, run.seed + 1, ... or scenario files.
std::vector<Scenario> ScenariosFrom(const Config& cfg);

// Writes through a temporary file and a rename.
void WriteFileAtomic(const std::filesystem::path& path, const std::string& content);

// Episodes for every (instance, policy); per-episode JSON under episodes/ and
// rollup.csv.
int RunSimulate(const Config& cfg, std::ostream& out);
// Mpc(harvest.horizon) over base and perturbed instances; JSON-lines pairs.
int RunHarvest(const Config& cfg, std::ostream& out);
// Fits the relocation model on train.dataset; model file, training curve and
// validation error tables.
int RunTrain(const Config& cfg, std::ostream& out);
// Simulate plus the comparison against the dispatcher: percent reductions,
// per-epoch series and transportation solve times.
int RunEvaluate(const Config& cfg, std::ostream& out);
// Lints instance or scenario files; with no files, the configured scenarios.
int RunValidate(const Config& cfg, const std::vector<std::filesystem::path>& files,
                std::ostream& out);

}  // namespace fleetreloc::cli

#endif  // FLEETRELOC_TOOLS_CLI_COMMANDS_H_
