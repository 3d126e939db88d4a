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

#include "fixtures.h"

namespace fleetreloc::fixture {

MpcInstance RandomTinyMpcInstance(std::mt19937_64& rng) {
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  HorizonConfig h;
  h.epochs = uniform(2, 3);
  h.max_wait_epochs = uniform(1, h.epochs);
  const int nz = uniform(2, 3);
  MpcInstance inst = make_empty_instance(nz, h, 1.5);

  // Vehicles mostly start in one home zone while riders mostly appear
  // elsewhere, so relocations are often worth their cost.
  const int home = uniform(0, nz - 1);
  const int fleet = uniform(1, 5);
  for (int v = 0; v < fleet; ++v) {
    const int t = uniform(0, 2) == 0 ? uniform(0, h.epochs - 1) : 0;
    ++inst.supply(uniform(0, 2) == 0 ? uniform(0, nz - 1) : home, t);
  }
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j < nz; ++j)
      for (int t = 0; t < h.epochs; ++t)
        if (uniform(0, i == home ? 5 : 2) == 0) inst.demand(i, j, t) = uniform(1, 2);
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j < nz; ++j) {
      inst.ride_share_ratio(i, j) = uniform(0, 1) == 0 ? 1.5 : 1.0;
      if (i == j) continue;
      inst.travel_epochs(i, j) = uniform(1, 2);
      inst.travel_seconds(i, j) = 100.0 * uniform(0, 8);
    }
  return inst;
}

MpcInstance ThresholdInstance(double travel_seconds) {
  HorizonConfig h;
  h.epochs = 3;
  h.max_wait_epochs = 1;
  MpcInstance inst = make_empty_instance(2, h, 1.5);
  inst.supply(0, 0) = 1;
  inst.demand(1, 1, 1) = 1;
  inst.travel_seconds(0, 1) = travel_seconds;
  inst.travel_seconds(1, 0) = travel_seconds;
  return inst;
}

}  // namespace fleetreloc::fixture
