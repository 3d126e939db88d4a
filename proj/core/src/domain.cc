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

#include "fleetreloc/domain.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fleetreloc {

int MpcInstance::fleet_size() const {
  return std::accumulate(supply.data().begin(), supply.data().end(), 0);
}

int MpcInstance::effective_big_m() const {
  if (weights.big_m.has_value()) return *weights.big_m;
  return std::max(1, fleet_size());
}

int MpcInstance::travel(int from, int to) const {
  if (from == to) return 1;
  return std::max(1, travel_epochs(from, to));
}

int RelocationPlan::total() const {
  return std::accumulate(flows.data().begin(), flows.data().end(), 0);
}

double AggregatedPlan::total_outflow() const {
  return std::accumulate(outflow.begin(), outflow.end(), 0.0);
}

double AggregatedPlan::total_inflow() const {
  return std::accumulate(inflow.begin(), inflow.end(), 0.0);
}

std::string Violation::ToString() const {
  std::ostringstream os;
  os << field;
  if (!index.empty()) {
    os << '[';
    for (std::size_t k = 0; k < index.size(); ++k) {
      if (k) os << "][";
      os << index[k];
    }
    os << ']';
  }
  os << ": " << rule;
  return os.str();
}

namespace {

class Reporter {
 public:
  void Add(std::string field, std::vector<int> index, std::string rule) {
    report_.push_back({std::move(field), std::move(index), std::move(rule)});
  }
  ValidationReport Take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

template <typename M>
bool CheckShape(Reporter& r, const char* field, const M& m, int rows,
                int cols) {
  if (m.rows() == rows && m.cols() == cols) return true;
  std::ostringstream os;
  os << "dimension mismatch: expected " << rows << "x" << cols << ", got "
     << m.rows() << "x" << m.cols();
  r.Add(field, {}, os.str());
  return false;
}

}  // namespace

ValidationReport validate_instance(const MpcInstance& inst) {
  Reporter r;
  const int z = inst.zones.count;
  const int t_len = inst.horizon.epochs;

  if (z < 1) r.Add("zones.count", {}, "must be >= 1");
  if (!inst.zones.centroids.empty() &&
      static_cast<int>(inst.zones.centroids.size()) != z) {
    r.Add("zones.centroids", {}, "must be empty or have one entry per zone");
  }
  if (t_len < 1) r.Add("horizon.epochs", {}, "must be >= 1");
  if (inst.horizon.max_wait_epochs < 1 ||
      inst.horizon.max_wait_epochs > t_len) {
    r.Add("horizon.max_wait_epochs", {}, "must satisfy 1 <= s <= T");
  }
  if (!(inst.horizon.epoch_seconds > 0.0)) {
    r.Add("horizon.epoch_seconds", {}, "must be > 0");
  }

  const WeightConfig& w = inst.weights;
  auto unit_interval = [&](const char* name, double v) {
    if (!(v > 0.0 && v <= 1.0)) r.Add(name, {}, "must lie in (0, 1]");
  };
  unit_interval("weights.qp_base", w.qp_base);
  unit_interval("weights.qp_decay", w.qp_decay);
  unit_interval("weights.qr_base", w.qr_base);
  if (!(w.qr_scale > 0.0)) r.Add("weights.qr_scale", {}, "must be > 0");

  if (z < 1 || t_len < 1) return r.Take();

  const Tensor3<int>& d = inst.demand;
  if (d.dim0() != z || d.dim1() != z || d.dim2() != t_len) {
    std::ostringstream os;
    os << "dimension mismatch: expected " << z << "x" << z << "x" << t_len
       << ", got " << d.dim0() << "x" << d.dim1() << "x" << d.dim2();
    r.Add("demand", {}, os.str());
  } else {
    for (int i = 0; i < z; ++i)
      for (int j = 0; j < z; ++j)
        for (int t = 0; t < t_len; ++t)
          if (d(i, j, t) < 0) r.Add("demand", {i, j, t}, "must be >= 0");
  }

  if (CheckShape(r, "supply", inst.supply, z, t_len)) {
    for (int i = 0; i < z; ++i)
      for (int t = 0; t < t_len; ++t)
        if (inst.supply(i, t) < 0) r.Add("supply", {i, t}, "must be >= 0");
  }
  if (CheckShape(r, "travel_epochs", inst.travel_epochs, z, z)) {
    for (int i = 0; i < z; ++i)
      for (int j = 0; j < z; ++j)
        if (i != j && inst.travel_epochs(i, j) < 1)
          r.Add("travel_epochs", {i, j}, "must be >= 1");
  }
  if (CheckShape(r, "travel_seconds", inst.travel_seconds, z, z)) {
    for (int i = 0; i < z; ++i)
      for (int j = 0; j < z; ++j) {
        const double v = inst.travel_seconds(i, j);
        if (!std::isfinite(v) || v < 0.0)
          r.Add("travel_seconds", {i, j}, "must be finite and >= 0");
      }
  }
  if (CheckShape(r, "ride_share_ratio", inst.ride_share_ratio, z, z)) {
    for (int i = 0; i < z; ++i)
      for (int j = 0; j < z; ++j) {
        const double v = inst.ride_share_ratio(i, j);
        if (!std::isfinite(v) || v <= 0.0)
          r.Add("ride_share_ratio", {i, j}, "must be finite and > 0");
      }
  }

  if (w.big_m.has_value()) {
    if (*w.big_m < 1) {
      r.Add("weights.big_M", {}, "must be a positive integer");
    } else if (inst.supply.rows() == z && inst.supply.cols() == t_len &&
               *w.big_m < inst.fleet_size()) {
      r.Add("weights.big_M", {}, "must be >= fleet size");
    }
  }
  return r.Take();
}

MpcInstance make_empty_instance(int zones, const HorizonConfig& horizon,
                                double ride_share_ratio) {
  MpcInstance inst;
  inst.zones.count = zones;
  inst.horizon = horizon;
  inst.demand = Tensor3<int>(zones, zones, horizon.epochs, 0);
  inst.supply = Matrix<int>(zones, horizon.epochs, 0);
  inst.travel_epochs = Matrix<int>(zones, zones, 1);
  inst.travel_seconds = Matrix<double>(zones, zones, 0.0);
  inst.ride_share_ratio = Matrix<double>(zones, zones, ride_share_ratio);
  return inst;
}

}  // namespace fleetreloc
