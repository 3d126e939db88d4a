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

// Core value types shared by the relocation model, the learned pipeline and
// the simulator. Zones are dense ids 0..|Z|-1; epochs inside a planning
// window are 0-based in code (epoch 0 is the first, "current" epoch).

#ifndef FLEETRELOC_DOMAIN_H_
#define FLEETRELOC_DOMAIN_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fleetreloc/grid.h"

namespace fleetreloc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct ZoneSet {
  int count = 0;
  // Either empty or one planar centroid (meters) per zone.
  std::vector<Point> centroids;

  bool operator==(const ZoneSet&) const = default;
};

struct HorizonConfig {
  int epochs = 6;            // T
  int max_wait_epochs = 3;   // s
  double epoch_seconds = 300.0;

  bool operator==(const HorizonConfig&) const = default;
};

struct WeightConfig {
  double qp_base = 0.5;
  double qp_decay = 0.75;
  double qr_scale = 0.001;
  double qr_base = 0.5;
  // Unset means "fleet size of the instance", i.e. the sum of supply.
  std::optional<int> big_m;

  bool operator==(const WeightConfig&) const = default;
};

// One planning window of the relocation model.
struct MpcInstance {
  ZoneSet zones;
  HorizonConfig horizon;
  Tensor3<int> demand;                // D[i][j][t], vehicles needed
  Matrix<int> supply;                 // V[i][t], vehicles becoming idle
  Matrix<int> travel_epochs;          // lambda[i][j]
  Matrix<double> travel_seconds;      // eta[i][j]
  Matrix<double> ride_share_ratio;    // W[i][j]
  WeightConfig weights;

  int zone_count() const { return zones.count; }
  int epochs() const { return horizon.epochs; }
  // Total vehicles entering the window.
  int fleet_size() const;
  // big_m if configured, else fleet size (at least 1).
  int effective_big_m() const;
  // Travel time with the self-trip convention lambda_ii = 1.
  int travel(int from, int to) const;

  bool operator==(const MpcInstance&) const = default;
};

// Zone-to-zone relocation counts for the first epoch. Diagonal is zero.
struct RelocationPlan {
  Matrix<int> flows;

  RelocationPlan() = default;
  explicit RelocationPlan(int zones) : flows(zones, zones, 0) {}

  int zone_count() const { return flows.rows(); }
  int total() const;
  bool is_zero() const { return total() == 0; }

  bool operator==(const RelocationPlan&) const = default;
};

// Per-zone relocation totals: vehicles leaving (outflow) and arriving
// (inflow). Real-valued when it is a raw prediction.
struct AggregatedPlan {
  std::vector<double> outflow;
  std::vector<double> inflow;

  AggregatedPlan() = default;
  explicit AggregatedPlan(int zones)
      : outflow(zones, 0.0), inflow(zones, 0.0) {}

  int zone_count() const { return static_cast<int>(outflow.size()); }
  double total_outflow() const;
  double total_inflow() const;

  bool operator==(const AggregatedPlan&) const = default;
};

struct Violation {
  std::string field;
  std::vector<int> index;
  std::string rule;

  std::string ToString() const;
  bool operator==(const Violation&) const = default;
};

using ValidationReport = std::vector<Violation>;

// Checks every structural invariant of an instance. Empty report iff valid.
ValidationReport validate_instance(const MpcInstance& inst);

// Builds an instance with the given dimensions, zero demand/supply, unit
// travel epochs, zero travel seconds and a broadcast ride-share ratio.
MpcInstance make_empty_instance(int zones, const HorizonConfig& horizon,
                                double ride_share_ratio = 1.5);

}  // namespace fleetreloc

#endif  // FLEETRELOC_DOMAIN_H_
