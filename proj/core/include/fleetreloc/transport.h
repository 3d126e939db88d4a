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

#ifndef FLEETRELOC_TRANSPORT_H_
#define FLEETRELOC_TRANSPORT_H_

#include <vector>

#include "fleetreloc/domain.h"

namespace fleetreloc {

class TransportError : public Error {
 public:
  using Error::Error;
};

// min sum c_ij z_ij  s.t.  sum_j z_ij = supply_i, sum_i z_ij = demand_j, z >= 0.
struct TransportProblem {
  std::vector<int> supply;
  std::vector<int> demand;
  Matrix<double> cost;  // supply.size() x demand.size(), finite, >= 0
  // Removes the arcs i -> i. Needs a square problem.
  bool forbid_diagonal = false;
};

struct TransportSolution {
  Matrix<int> flows;
  double total_cost = 0.0;
};

// Successive shortest augmenting paths with node potentials. Throws
// TransportError on unbalanced margins, malformed input, or (with a forbidden
// diagonal) margins no flow can meet.
TransportSolution solve_transportation(const TransportProblem& p);

}  // namespace fleetreloc

#endif  // FLEETRELOC_TRANSPORT_H_
