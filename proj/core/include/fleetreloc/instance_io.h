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

// JSON instance file:
//   { "zones": {"count": n, "centroids": [[x, y], ...]},
//     "horizon": {"epochs": T, "max_wait_epochs": s, "epoch_seconds": 300},
//     "demand": [i][j][t], "supply": [i][t],
//     "travel_epochs": [i][j], "travel_seconds": [i][j],
//     "ride_share_ratio": [i][j],
//     "weights": {"qp_base", "qp_decay", "qr_scale", "qr_base", "big_M"} }
// Arrays are dense; their shape is taken from the file, so a dimension
// mismatch survives loading and is reported by validate_instance.

#ifndef FLEETRELOC_INSTANCE_IO_H_
#define FLEETRELOC_INSTANCE_IO_H_

#include <filesystem>

#include <nlohmann/json.hpp>

#include "fleetreloc/domain.h"

namespace fleetreloc {

class LoadError : public Error {
 public:
  using Error::Error;
};

nlohmann::json instance_to_json(const MpcInstance& inst);
MpcInstance instance_from_json(const nlohmann::json& doc);

void write_instance(const std::filesystem::path& path, const MpcInstance& inst);
MpcInstance read_instance(const std::filesystem::path& path);

nlohmann::json plan_to_json(const RelocationPlan& plan);

}  // namespace fleetreloc

#endif  // FLEETRELOC_INSTANCE_IO_H_
