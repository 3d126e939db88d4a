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

// Trip ingestion, demand tensors, forecast noise, instance perturbation and
// synthetic scenarios.

#ifndef FLEETRELOC_DATAIO_H_
#define FLEETRELOC_DATAIO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fleetreloc/domain.h"

namespace fleetreloc {

struct TripRecord {
  double pickup_seconds = 0.0;  // since the episode start
  int origin = 0;
  int destination = 0;
  int party_size = 1;

  bool operator==(const TripRecord&) const = default;
};

// Axis-aligned grid of cols x rows rectangles; zone id = row * cols + col.
struct ZoneGrid {
  double min_x = 0.0;
  double min_y = 0.0;
  double cell_width = 1.0;
  double cell_height = 1.0;
  int cols = 1;
  int rows = 1;

  int zone_count() const { return cols * rows; }
  // nullopt outside the grid. The upper edges belong to the last cells.
  std::optional<int> ZoneOf(double x, double y) const;
  ZoneSet Zones() const;
};

// Column names in the header row. Zone columns win over coordinates when
// both are present.
struct TripCsvSchema {
  std::string pickup_time = "pickup_datetime";
  std::string pickup_zone = "pickup_zone";
  std::string dropoff_zone = "dropoff_zone";
  std::string pickup_lon = "pickup_lon";
  std::string pickup_lat = "pickup_lat";
  std::string dropoff_lon = "dropoff_lon";
  std::string dropoff_lat = "dropoff_lat";
  std::string passenger_count = "passenger_count";
  std::optional<ZoneGrid> grid;  // needed for coordinate columns
  int zone_count = 0;            // direct zone ids must be below this; 0 = any
  // Timestamps are shifted so that this instant is 0; unset = earliest trip.
  std::optional<double> start_seconds;
};

struct TripLoad {
  std::vector<TripRecord> trips;  // sorted by pickup time, stable
  int unmappable = 0;             // outside every zone
  int malformed = 0;              // unparsable fields
  std::vector<std::string> diagnostics;  // first few malformed rows
};

// Timestamps are "YYYY-MM-DD HH:MM:SS" (UTC) or plain seconds. Throws
// LoadError when the file cannot be read or lacks a needed column.
TripLoad load_trips(const std::filesystem::path& path, const TripCsvSchema& schema);

// D_ijt = ceil(riders(i, j, t) / pooling_ratio) where epoch t starts at
// start_seconds + t * epoch_seconds.
Tensor3<int> build_demand(const std::vector<TripRecord>& trips, int zones,
                          const HorizonConfig& horizon, double pooling_ratio,
                          double start_seconds = 0.0);
// Same, from rider counts.
int vehicles_needed(int riders, double pooling_ratio);

// max(0, round(D + e)), e ~ Normal(0, sigma_pct / 100 * D) per cell.
Tensor3<int> forecast_demand(const Tensor3<int>& demand, double sigma_pct, std::uint64_t seed);

// Adds (p > 0) or deletes (p < 0) round(|p|% of n) uniformly drawn trips;
// p ~ Normal(0, sigma_pct) unless forced. Added copies shift by up to one
// tick either way.
std::vector<TripRecord> perturb_trips(const std::vector<TripRecord>& trips, std::uint64_t seed,
                                      double tick_seconds = 30.0, double sigma_pct = 2.5,
                                      std::optional<double> forced_pct = std::nullopt,
                                      double* drawn_pct = nullptr);

// A rider stream plus the static network it runs on.
struct Scenario {
  std::string name;
  ZoneSet zones;
  Matrix<int> travel_epochs;
  Matrix<double> travel_seconds;
  std::vector<int> initial_fleet;  // idle vehicles per zone at tick 0
  std::vector<TripRecord> trips;   // sorted by pickup time
  int episode_epochs = 24;
  double epoch_seconds = 300.0;

  int zone_count() const { return zones.count; }
  int fleet_size() const;
};

// Travel seconds = Manhattan centroid distance / speed; epochs =
// max(1, ceil(seconds / epoch_seconds)).
void derive_travel(const ZoneSet& zones, double speed_mps, double epoch_seconds,
                   Matrix<int>* travel_epochs, Matrix<double>* travel_seconds);

// Zones on a grid; riders concentrate in a few hot zones at one end while the
// fleet starts in the zones farthest from them. A thinner background stream
// runs between the other zones.
struct SyntheticConfig {
  int zones = 10;
  int grid_cols = 5;
  double spacing_m = 1000.0;
  double jitter_m = 150.0;  // centroid offsets; keeps travel costs free of ties
  double speed_mps = 8.0;
  int fleet = 100;
  int hot_zones = 3;
  int episode_epochs = 24;
  double epoch_seconds = 300.0;
  double tick_seconds = 30.0;
  double hot_riders_per_epoch = 15.0;
  double background_riders_per_epoch = 10.0;
  double background_to_hot = 0.6;  // share of background riders heading to hot zones
  std::uint64_t seed = 1;         // rider stream
  std::uint64_t layout_seed = 1;  // centroid jitter; shared by a family
};

Scenario make_synthetic_scenario(const SyntheticConfig& cfg);

nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& doc);
void write_scenario(const std::filesystem::path& path, const Scenario& s);
Scenario read_scenario(const std::filesystem::path& path);

}  // namespace fleetreloc

#endif  // FLEETRELOC_DATAIO_H_
