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

// Zone-level rolling-horizon simulator. Time advances in ticks; every
// ticks_per_epoch ticks the relocation policy sees a forecast instance and
// moves idle vehicles.
//
// Tick order: vehicle arrivals, rider arrivals, dropouts (wait > s epochs),
// dispatch. At an epoch boundary the relocation step follows the dispatch.

#ifndef FLEETRELOC_SIMULATOR_H_
#define FLEETRELOC_SIMULATOR_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "fleetreloc/dataio.h"
#include "fleetreloc/domain.h"
#include "fleetreloc/policy.h"

namespace fleetreloc {

enum class VehicleStatus { kIdle, kServing, kRelocating };

struct Vehicle {
  int id = 0;
  VehicleStatus status = VehicleStatus::kIdle;
  int zone = 0;              // current zone when idle, destination when moving
  long arrival_tick = 0;     // moving only; > now
};

struct RiderRequest {
  int id = 0;
  int origin = 0;
  int destination = 0;
  long arrival_tick = 0;
  int party_size = 1;
  std::optional<long> pickup_tick;
  std::optional<long> dropout_tick;

  bool waiting() const { return !pickup_tick && !dropout_tick; }
};

struct SimConfig {
  double tick_seconds = 30.0;
  int ticks_per_epoch = 10;
  int relocation_period_ticks = 10;  // multiple of the 1-tick dispatch period
  int max_wait_epochs = 3;
  double pooling_ratio = 1.5;
  double forecast_sigma_pct = 2.5;
  WeightConfig weights;
  MilpConfig milp;
  std::uint64_t seed = 1;

  double epoch_seconds() const { return tick_seconds * ticks_per_epoch; }
  int pooling_cap() const;  // ceil(pooling_ratio)
};

// Throws Error naming the field.
void validate_config(const SimConfig& cfg);

struct EpochRecord {
  int epoch = 0;
  double waiting_avg = 0.0;  // minutes, riders picked up during the epoch
  int served = 0;
  int dropped = 0;
  int relocations = 0;
  int idle_count = 0;        // at the boundary, before relocating
  bool solver_failed = false;
  double decide_seconds = 0.0;
  double transport_seconds = 0.0;
};

struct EpisodeMetrics {
  double waiting_avg = 0.0;  // minutes over served riders
  int arrivals = 0;
  int served = 0;
  int dropped = 0;
  int waiting = 0;           // still waiting when the episode ends
  int relocations = 0;
  double relocation_seconds = 0.0;  // vehicle-seconds
  int decisions = 0;
  int solver_failures = 0;
  std::vector<EpochRecord> epochs;
};

// One recorded relocation decision: the exact instance the policy saw and its
// aggregated first-epoch plan.
struct TrainingPair {
  std::vector<double> input;
  std::vector<double> label;
  int group = 0;
  int epoch = 0;
};

class Simulator {
 public:
  Simulator(const Scenario& scenario, const SimConfig& cfg);

  long now() const { return now_; }
  const std::vector<Vehicle>& vehicles() const { return vehicles_; }
  const std::vector<RiderRequest>& riders() const { return riders_; }
  const EpisodeMetrics& metrics() const { return metrics_; }

  // Moves the clock to the given tick and runs vehicle arrivals, rider
  // arrivals and dropouts for it. Ticks must not go backwards.
  void Advance(long tick);
  // Greedy zone-local matching; returns the number of vehicles dispatched.
  int Dispatch();
  // V[i][t]: idle now -> t = 0; moving -> epoch of the arrival tick.
  Matrix<int> EstimateSupply(int epochs) const;
  // Riders waiting now plus the true arrivals of the next epochs, as vehicle
  // counts; waiting riders join the first cohort.
  Tensor3<int> TrueDemand(int epochs) const;
  // Sends plan[i][j] idle vehicles from i to j, lowest ids first. Rows above
  // the idle count are clipped with a warning. Returns vehicles moved.
  int ApplyRelocations(const RelocationPlan& plan);

  int idle_count() const;

 private:
  void Finish(long pickup, RiderRequest& r);

  const Scenario& scenario_;
  SimConfig cfg_;
  long now_ = -1;
  std::size_t next_trip_ = 0;
  std::vector<Vehicle> vehicles_;
  std::vector<RiderRequest> riders_;
  std::vector<int> open_;  // ids of waiting riders, oldest first
  EpisodeMetrics metrics_;
  double epoch_wait_sum_ = 0.0;
  friend EpisodeMetrics run_episode(const Scenario&, const Policy&, const SimConfig&,
                                    std::vector<TrainingPair>*, int);
};

// Runs scenario.episode_epochs epochs. When pairs is set, every MPC decision
// with an incumbent is recorded with the given group id.
EpisodeMetrics run_episode(const Scenario& scenario, const Policy& policy, const SimConfig& cfg,
                           std::vector<TrainingPair>* pairs = nullptr, int group = 0);

nlohmann::json config_to_json(const SimConfig& cfg);
// Wall times vary between runs; leave them out for reproducible output.
nlohmann::json metrics_to_json(const EpisodeMetrics& m, bool include_timings = true);
// epoch,waiting_avg,relocations,idle_count
void write_epoch_csv(const std::filesystem::path& path, const EpisodeMetrics& m);

nlohmann::json pair_to_json(const TrainingPair& p);
TrainingPair pair_from_json(const nlohmann::json& doc);
void write_pairs(const std::filesystem::path& path, const std::vector<TrainingPair>& pairs);
std::vector<TrainingPair> read_pairs(const std::filesystem::path& path);

}  // namespace fleetreloc

#endif  // FLEETRELOC_SIMULATOR_H_
