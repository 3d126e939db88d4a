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

// Brute-force reference solvers used only by tests. None of them share code
// with the library paths they check.

#ifndef FLEETRELOC_TESTS_ORACLES_H_
#define FLEETRELOC_TESTS_ORACLES_H_

#include <optional>
#include <vector>

#include "fleetreloc/domain.h"

namespace fleetreloc::oracle {

// Dense inequality system  G x <= h  plus objective  max c x.
struct DenseLp {
  std::vector<std::vector<double>> g;
  std::vector<double> h;
  std::vector<double> c;
};

// Best vertex of a bounded polytope by trying every n-subset of constraints
// as active. nullopt when no feasible vertex exists.
std::optional<double> VertexEnumerationMax(const DenseLp& lp);

// Best integer point in the box [0, ub] satisfying G x <= h.
std::optional<double> IntegerBoxMax(const DenseLp& lp, const std::vector<int>& ub);

// Optimal objective of the relocation model on a tiny instance, computed by
// dynamic programming over epochs on the model's semantics (vehicle stocks,
// remaining cohort demand, in-flight arrivals) instead of its MILP rows.
double MpcOptimum(const MpcInstance& inst);

// Minimum transportation cost by enumerating every integral flow matrix with
// the given margins. nullopt when the margins are unbalanced.
std::optional<double> TransportMinCost(const std::vector<int>& supply,
                                       const std::vector<int>& demand,
                                       const Matrix<double>& cost,
                                       Matrix<int>* best_flow = nullptr);

}  // namespace fleetreloc::oracle

#endif  // FLEETRELOC_TESTS_ORACLES_H_
