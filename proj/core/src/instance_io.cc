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

#include "fleetreloc/instance_io.h"

#include <fstream>

namespace fleetreloc {

using nlohmann::json;

namespace {

template <typename T>
json MatrixToJson(const Matrix<T>& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

template <typename T>
Matrix<T> MatrixFromJson(const json& doc, const char* field) {
  if (!doc.is_array()) throw LoadError(std::string(field) + ": expected array");
  const int rows = static_cast<int>(doc.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(doc[0].size());
  Matrix<T> m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!doc[r].is_array() || static_cast<int>(doc[r].size()) != cols) {
      throw LoadError(std::string(field) + ": ragged array at row " +
                      std::to_string(r));
    }
    for (int c = 0; c < cols; ++c) m(r, c) = doc[r][c].get<T>();
  }
  return m;
}

Tensor3<int> TensorFromJson(const json& doc, const char* field) {
  if (!doc.is_array()) throw LoadError(std::string(field) + ": expected array");
  const int d0 = static_cast<int>(doc.size());
  const int d1 = d0 == 0 ? 0 : static_cast<int>(doc[0].size());
  const int d2 = d1 == 0 ? 0 : static_cast<int>(doc[0][0].size());
  Tensor3<int> t(d0, d1, d2);
  for (int i = 0; i < d0; ++i) {
    if (!doc[i].is_array() || static_cast<int>(doc[i].size()) != d1)
      throw LoadError(std::string(field) + ": ragged array");
    for (int j = 0; j < d1; ++j) {
      if (!doc[i][j].is_array() || static_cast<int>(doc[i][j].size()) != d2)
        throw LoadError(std::string(field) + ": ragged array");
      for (int k = 0; k < d2; ++k) t(i, j, k) = doc[i][j][k].get<int>();
    }
  }
  return t;
}

const json& Require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw LoadError(std::string("missing key '") + key + "'");
  return *it;
}

}  // namespace

json instance_to_json(const MpcInstance& inst) {
  json zones{{"count", inst.zones.count}, {"centroids", json::array()}};
  for (const Point& p : inst.zones.centroids)
    zones["centroids"].push_back({p.x, p.y});

  json demand = json::array();
  for (int i = 0; i < inst.demand.dim0(); ++i) {
    json plane = json::array();
    for (int j = 0; j < inst.demand.dim1(); ++j) {
      json cell = json::array();
      for (int t = 0; t < inst.demand.dim2(); ++t)
        cell.push_back(inst.demand(i, j, t));
      plane.push_back(std::move(cell));
    }
    demand.push_back(std::move(plane));
  }

  const WeightConfig& w = inst.weights;
  json weights{{"qp_base", w.qp_base},
               {"qp_decay", w.qp_decay},
               {"qr_scale", w.qr_scale},
               {"qr_base", w.qr_base},
               {"big_M", w.big_m ? json(*w.big_m) : json(nullptr)}};

  return json{{"zones", std::move(zones)},
              {"horizon",
               {{"epochs", inst.horizon.epochs},
                {"max_wait_epochs", inst.horizon.max_wait_epochs},
                {"epoch_seconds", inst.horizon.epoch_seconds}}},
              {"demand", std::move(demand)},
              {"supply", MatrixToJson(inst.supply)},
              {"travel_epochs", MatrixToJson(inst.travel_epochs)},
              {"travel_seconds", MatrixToJson(inst.travel_seconds)},
              {"ride_share_ratio", MatrixToJson(inst.ride_share_ratio)},
              {"weights", std::move(weights)}};
}

MpcInstance instance_from_json(const json& doc) {
  MpcInstance inst;
  try {
    const json& zones = Require(doc, "zones");
    inst.zones.count = Require(zones, "count").get<int>();
    if (auto it = zones.find("centroids"); it != zones.end()) {
      for (const json& p : *it) {
        if (!p.is_array() || p.size() != 2)
          throw LoadError("zones.centroids: expected [x, y] pairs");
        inst.zones.centroids.push_back({p[0].get<double>(), p[1].get<double>()});
      }
    }
    const json& horizon = Require(doc, "horizon");
    inst.horizon.epochs = Require(horizon, "epochs").get<int>();
    inst.horizon.max_wait_epochs = Require(horizon, "max_wait_epochs").get<int>();
    inst.horizon.epoch_seconds = horizon.value("epoch_seconds", 300.0);

    inst.demand = TensorFromJson(Require(doc, "demand"), "demand");
    inst.supply = MatrixFromJson<int>(Require(doc, "supply"), "supply");
    inst.travel_epochs =
        MatrixFromJson<int>(Require(doc, "travel_epochs"), "travel_epochs");
    inst.travel_seconds =
        MatrixFromJson<double>(Require(doc, "travel_seconds"), "travel_seconds");
    inst.ride_share_ratio = MatrixFromJson<double>(
        Require(doc, "ride_share_ratio"), "ride_share_ratio");

    if (auto it = doc.find("weights"); it != doc.end()) {
      WeightConfig& w = inst.weights;
      w.qp_base = it->value("qp_base", w.qp_base);
      w.qp_decay = it->value("qp_decay", w.qp_decay);
      w.qr_scale = it->value("qr_scale", w.qr_scale);
      w.qr_base = it->value("qr_base", w.qr_base);
      if (auto m = it->find("big_M"); m != it->end() && !m->is_null())
        w.big_m = m->get<int>();
    }
  } catch (const json::exception& e) {
    throw LoadError(std::string("malformed instance: ") + e.what());
  }
  return inst;
}

void write_instance(const std::filesystem::path& path, const MpcInstance& inst) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << instance_to_json(inst).dump(1) << '\n';
}

MpcInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
  return instance_from_json(doc);
}

json plan_to_json(const RelocationPlan& plan) {
  return MatrixToJson(plan.flows);
}

}  // namespace fleetreloc
