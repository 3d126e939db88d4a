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

// Relocation policies and the predict, restore, disaggregate pipeline that
// stands in for the MPC at decision time.

#ifndef FLEETRELOC_POLICY_H_
#define FLEETRELOC_POLICY_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fleetreloc/domain.h"
#include "fleetreloc/milp.h"
#include "fleetreloc/neural.h"

namespace fleetreloc {

// y^o_i = row sums, y^d_i = column sums (diagonal ignored).
AggregatedPlan aggregate(const RelocationPlan& plan);

// Makes a raw prediction feasible:
//   1. round to the nearest non-negative integer (.5 up, negatives and NaN
//      to 0);
//   2. cap y^o_i at v1_i;
//   3. while the totals differ, decrement a uniformly drawn non-zero entry of
//      the larger side;
//   4. if one zone holds y^o_i + y^d_i > total, cancel the excess on both of
//      its sides, since no off-diagonal flow can route it.
// With step 4 the result satisfies aggregate(disaggregate(r, c)) == r for
// every cost c; routable = false stops after step 3.
AggregatedPlan restore_feasibility(const AggregatedPlan& raw, std::span<const int> v1,
                                   std::uint64_t seed, bool routable = true);

// True when the plan is integral, non-negative, balanced, within v1 and
// routable without self-relocations.
bool is_feasible_aggregate(const AggregatedPlan& agg, std::span<const int> v1);

// Min-cost zone-to-zone flows with the given margins and no diagonal.
// Optionally reports the transportation solve time.
RelocationPlan disaggregate(const AggregatedPlan& agg, const Matrix<double>& cost,
                            double* solve_seconds = nullptr);

// flatten(V[i][t]) ++ flatten(D[i][j][t]).
std::vector<double> encode_input(const MpcInstance& inst);
// [y^d_0 .. y^d_{Z-1}, y^o_0 .. y^o_{Z-1}].
std::vector<double> encode_label(const AggregatedPlan& agg);
AggregatedPlan decode_output(std::span<const double> y);

// Truncates or zero-pads demand and supply to T epochs; s is clipped to T.
MpcInstance with_horizon(const MpcInstance& inst, int epochs);

enum class PolicyKind { kDispatcher, kMpc, kLearned };

struct Policy {
  PolicyKind kind = PolicyKind::kDispatcher;
  int horizon = 6;                       // kMpc only
  std::shared_ptr<const MlpModel> model;  // kLearned only

  static Policy Dispatcher() { return {}; }
  static Policy Mpc(int horizon) { return {PolicyKind::kMpc, horizon, nullptr}; }
  static Policy Learned(std::shared_ptr<const MlpModel> model) {
    return {PolicyKind::kLearned, model ? model->horizon : 0, std::move(model)};
  }

  // "dispatcher", "mpc<T>" or "learned".
  std::string name() const;
  // Horizon of the instance the policy wants; 0 for the dispatcher.
  int planning_horizon() const;
};

// Throws Error naming the token when it is not dispatcher, mpc<T> or learned.
Policy parse_policy(const std::string& token, std::shared_ptr<const MlpModel> model = nullptr);

struct DecideOptions {
  MilpConfig milp;
  std::uint64_t seed = 0;  // restoration draws
};

struct Decision {
  RelocationPlan plan;
  // MPC runs only: no incumbent, so the plan is empty.
  bool solver_failed = false;
  std::optional<MilpSolution> solution;
  double wall_seconds = 0.0;
  double transport_seconds = 0.0;
};

Decision decide(const Policy& policy, const MpcInstance& inst, const DecideOptions& opts = {});

}  // namespace fleetreloc

#endif  // FLEETRELOC_POLICY_H_
