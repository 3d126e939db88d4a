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

#include "fleetreloc/policy.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include <spdlog/spdlog.h>

#include "fleetreloc/mpc.h"
#include "fleetreloc/transport.h"

namespace fleetreloc {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

double RoundNonNegative(double v) {
  if (!(v > 0.0)) return 0.0;
  return std::floor(v + 0.5);
}

double Sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

AggregatedPlan aggregate(const RelocationPlan& plan) {
  const int nz = plan.zone_count();
  AggregatedPlan agg(nz);
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j < nz; ++j) {
      if (i == j) continue;
      agg.outflow[i] += plan.flows(i, j);
      agg.inflow[j] += plan.flows(i, j);
    }
  return agg;
}

AggregatedPlan restore_feasibility(const AggregatedPlan& raw, std::span<const int> v1,
                                   std::uint64_t seed, bool routable) {
  const int nz = raw.zone_count();
  if (static_cast<int>(raw.inflow.size()) != nz || static_cast<int>(v1.size()) != nz)
    throw Error("restore_feasibility: plan and supply sizes differ");
  AggregatedPlan out(nz);
  for (int i = 0; i < nz; ++i) {
    out.outflow[i] = std::min(RoundNonNegative(raw.outflow[i]),
                              static_cast<double>(std::max(0, v1[i])));
    out.inflow[i] = RoundNonNegative(raw.inflow[i]);
  }

  std::mt19937_64 rng(seed);
  std::vector<int> nonzero;
  for (;;) {
    const double so = Sum(out.outflow), sd = Sum(out.inflow);
    if (so == sd) break;
    std::vector<double>& side = so > sd ? out.outflow : out.inflow;
    nonzero.clear();
    for (int i = 0; i < nz; ++i)
      if (side[i] > 0.0) nonzero.push_back(i);
    const int pick = std::uniform_int_distribution<int>(
        0, static_cast<int>(nonzero.size()) - 1)(rng);
    side[nonzero[pick]] -= 1.0;
  }

  if (!routable) return out;
  // At most one zone can exceed the total, since two such zones would need
  // more than the total on one side.
  const double total = Sum(out.outflow);
  for (int i = 0; i < nz; ++i) {
    const double excess = out.outflow[i] + out.inflow[i] - total;
    if (excess > 0.0) {
      out.outflow[i] -= excess;
      out.inflow[i] -= excess;
      break;
    }
  }
  return out;
}

bool is_feasible_aggregate(const AggregatedPlan& agg, std::span<const int> v1) {
  const int nz = agg.zone_count();
  if (static_cast<int>(agg.inflow.size()) != nz || static_cast<int>(v1.size()) != nz)
    return false;
  double so = 0.0, sd = 0.0;
  for (int i = 0; i < nz; ++i) {
    for (double v : {agg.outflow[i], agg.inflow[i]})
      if (v < 0.0 || v != std::floor(v)) return false;
    if (agg.outflow[i] > v1[i]) return false;
    so += agg.outflow[i];
    sd += agg.inflow[i];
  }
  if (so != sd) return false;
  for (int i = 0; i < nz; ++i)
    if (agg.outflow[i] + agg.inflow[i] > so) return false;
  return true;
}

RelocationPlan disaggregate(const AggregatedPlan& agg, const Matrix<double>& cost,
                            double* solve_seconds) {
  const int nz = agg.zone_count();
  TransportProblem p;
  p.supply.resize(nz);
  p.demand.resize(nz);
  for (int i = 0; i < nz; ++i) {
    p.supply[i] = static_cast<int>(std::lround(agg.outflow[i]));
    p.demand[i] = static_cast<int>(std::lround(agg.inflow[i]));
  }
  p.cost = cost;
  p.forbid_diagonal = true;
  const auto t0 = Clock::now();
  TransportSolution sol = solve_transportation(p);
  if (solve_seconds != nullptr) *solve_seconds = Seconds(t0);
  RelocationPlan plan;
  plan.flows = std::move(sol.flows);
  return plan;
}

std::vector<double> encode_input(const MpcInstance& inst) {
  std::vector<double> x;
  x.reserve(inst.supply.data().size() + inst.demand.data().size());
  x.insert(x.end(), inst.supply.data().begin(), inst.supply.data().end());
  x.insert(x.end(), inst.demand.data().begin(), inst.demand.data().end());
  return x;
}

std::vector<double> encode_label(const AggregatedPlan& agg) {
  std::vector<double> y = agg.inflow;
  y.insert(y.end(), agg.outflow.begin(), agg.outflow.end());
  return y;
}

AggregatedPlan decode_output(std::span<const double> y) {
  if (y.size() % 2 != 0) throw Error("prediction length must be even");
  const std::size_t nz = y.size() / 2;
  AggregatedPlan agg;
  agg.inflow.assign(y.begin(), y.begin() + nz);
  agg.outflow.assign(y.begin() + nz, y.end());
  return agg;
}

MpcInstance with_horizon(const MpcInstance& inst, int epochs) {
  if (epochs < 1) throw Error("horizon must be at least 1 epoch");
  if (epochs == inst.epochs()) return inst;
  const int nz = inst.zone_count();
  MpcInstance out = inst;
  out.horizon.epochs = epochs;
  out.horizon.max_wait_epochs = std::min(inst.horizon.max_wait_epochs, epochs);
  out.demand = Tensor3<int>(nz, nz, epochs, 0);
  out.supply = Matrix<int>(nz, epochs, 0);
  const int keep = std::min(epochs, inst.epochs());
  for (int i = 0; i < nz; ++i)
    for (int t = 0; t < keep; ++t) {
      out.supply(i, t) = inst.supply(i, t);
      for (int j = 0; j < nz; ++j) out.demand(i, j, t) = inst.demand(i, j, t);
    }
  return out;
}

std::string Policy::name() const {
  switch (kind) {
    case PolicyKind::kDispatcher:
      return "dispatcher";
    case PolicyKind::kMpc:
      return "mpc" + std::to_string(horizon);
    case PolicyKind::kLearned:
      return "learned";
  }
  return "unknown";
}

int Policy::planning_horizon() const {
  switch (kind) {
    case PolicyKind::kDispatcher:
      return 0;
    case PolicyKind::kMpc:
      return horizon;
    case PolicyKind::kLearned:
      return model ? model->horizon : horizon;
  }
  return 0;
}

Policy parse_policy(const std::string& token, std::shared_ptr<const MlpModel> model) {
  if (token == "dispatcher") return Policy::Dispatcher();
  if (token == "learned") {
    if (!model) throw Error("policy 'learned' needs a model file");
    return Policy::Learned(std::move(model));
  }
  if (token.rfind("mpc", 0) == 0 && token.size() > 3) {
    const std::string digits = token.substr(3);
    if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
        digits.size() <= 3) {
      const int t = std::stoi(digits);
      if (t >= 1) return Policy::Mpc(t);
    }
  }
  throw Error("unknown policy '" + token + "' (expected dispatcher, mpc<T> or learned)");
}

Decision decide(const Policy& policy, const MpcInstance& inst, const DecideOptions& opts) {
  const auto t0 = Clock::now();
  Decision d;
  d.plan = RelocationPlan(inst.zone_count());
  switch (policy.kind) {
    case PolicyKind::kDispatcher:
      break;
    case PolicyKind::kMpc: {
      MpcDecision mpc = solve_mpc(with_horizon(inst, policy.horizon), opts.milp);
      if (mpc.first_epoch_plan) {
        d.plan = *mpc.first_epoch_plan;
      } else {
        d.solver_failed = true;
        spdlog::warn("{}: solver returned {} without an incumbent; no relocations this epoch",
                     policy.name(), ToString(mpc.solution.status));
      }
      d.solution = std::move(mpc.solution);
      break;
    }
    case PolicyKind::kLearned: {
      if (!policy.model) throw Error("learned policy has no model");
      const MlpModel& m = *policy.model;
      if (m.zones != 0 && m.zones != inst.zone_count()) {
        throw Error("model was trained for " + std::to_string(m.zones) +
                    " zones, instance has " + std::to_string(inst.zone_count()));
      }
      const MpcInstance view = m.horizon > 0 ? with_horizon(inst, m.horizon) : inst;
      const std::vector<double> y = forward(m, encode_input(view));
      std::vector<int> v1(inst.zone_count());
      for (int i = 0; i < inst.zone_count(); ++i) v1[i] = inst.supply(i, 0);
      const AggregatedPlan agg = restore_feasibility(decode_output(y), v1, opts.seed);
      d.plan = disaggregate(agg, inst.travel_seconds, &d.transport_seconds);
      break;
    }
  }
  d.wall_seconds = Seconds(t0);
  return d;
}

}  // namespace fleetreloc
