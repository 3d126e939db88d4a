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

// Instance generators shared by unit and acceptance tests.

#ifndef FLEETRELOC_TESTS_FIXTURES_H_
#define FLEETRELOC_TESTS_FIXTURES_H_

#include <random>

#include "fleetreloc/domain.h"

namespace fleetreloc::fixture {

// |Z| <= 3, T <= 3, fleet <= 5, demand entries <= 2.
MpcInstance RandomTinyMpcInstance(std::mt19937_64& rng);

// Two zones, T = 3, s = 1, unit travel both ways, one idle vehicle in zone 0
// at the first epoch and one intra-zone rider group in zone 1 at the second.
MpcInstance ThresholdInstance(double travel_seconds);

}  // namespace fleetreloc::fixture

#endif  // FLEETRELOC_TESTS_FIXTURES_H_
