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

#include "fleetreloc/mpc.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace fleetreloc {
namespace {

std::string Name(const char* prefix, std::initializer_list<int> ids) {
  std::string s(prefix);
  for (int id : ids) {
    s += '_';
    s += std::to_string(id);
  }
  return s;
}

const char* FamilyOf(const std::string& field) {
  if (field.rfind("demand", 0) == 0) return "cohort/demand_gate";
  if (field.rfind("supply", 0) == 0) return "balance";
  if (field.rfind("travel_epochs", 0) == 0) return "balance";
  if (field.rfind("travel_seconds", 0) == 0) return "objective (relocation cost)";
  if (field.rfind("ride_share_ratio", 0) == 0) return "objective (service weight)";
  if (field.rfind("weights", 0) == 0) return "objective/gates";
  return "model dimensions";
}

}  // namespace

std::vector<int> phi(int t, int s, int horizon) {
  std::vector<int> out;
  for (int rho = t; rho <= std::min(t + s - 1, horizon); ++rho) out.push_back(rho);
  return out;
}

double weight_qp(int t, int rho, const WeightConfig& cfg) {
  return std::pow(cfg.qp_base, t) * std::pow(cfg.qp_decay, rho - t);
}

double weight_qr(int t, double travel_seconds, const WeightConfig& cfg) {
  return cfg.qr_scale * std::pow(cfg.qr_base, t) * travel_seconds;
}

MpcVariableIndex::MpcVariableIndex(int zones, int epochs, int max_wait)
    : zones_(zones), epochs_(epochs), max_wait_(max_wait),
      serve_(static_cast<std::size_t>(zones) * zones * epochs),
      reloc_(zones * zones, epochs, -1), stay_(zones, epochs + 1, -1),
      unserved_(zones, epochs, -1) {}

int MpcVariableIndex::serve(int i, int j, int t0, int rho) const {
  const auto& slot = serve_[(static_cast<std::size_t>(i) * zones_ + j) * epochs_ + t0];
  const int k = rho - t0;
  if (k < 0 || k >= static_cast<int>(slot.size())) return -1;
  return slot[k];
}

MpcModel build_model(const MpcInstance& inst) {
  const ValidationReport report = validate_instance(inst);
  if (!report.empty()) {
    throw ModelError(std::string("cannot build ") + FamilyOf(report.front().field) +
                     " constraints: " + report.front().ToString());
  }

  const int nz = inst.zone_count();
  const int nt = inst.epochs();
  const int s = inst.horizon.max_wait_epochs;
  const int big_m = inst.effective_big_m();
  const double fleet = std::max(0, inst.fleet_size());
  const WeightConfig& w = inst.weights;

  MpcModel model{MilpProblem(ObjectiveSense::kMaximize), MpcVariableIndex(nz, nt, s)};
  MilpProblem& p = model.problem;
  MpcVariableIndex& idx = model.index;

  for (int i = 0; i < nz; ++i)
    for (int j = 0; j < nz; ++j)
      for (int t0 = 0; t0 < nt; ++t0) {
        const int d = inst.demand(i, j, t0);
        if (d <= 0) continue;
        auto& slot = idx.serve_[(static_cast<std::size_t>(i) * nz + j) * nt + t0];
        for (int rho : phi(t0 + 1, s, nt)) {
          const double gain = weight_qp(t0 + 1, rho, w) * inst.ride_share_ratio(i, j);
          slot.push_back(p.AddVariable(Name("xp", {i, j, t0, rho - 1}), 0.0, d, gain, true));
          ++idx.count_serve_;
        }
      }
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j < nz; ++j) {
      if (i == j) continue;
      for (int t = 0; t < nt; ++t) {
        const double cost = weight_qr(t + 1, inst.travel_seconds(i, j), w);
        idx.reloc_(i * nz + j, t) =
            p.AddVariable(Name("xr", {i, j, t}), 0.0, big_m, -cost, true);
        ++idx.count_reloc_;
      }
    }
  for (int i = 0; i < nz; ++i)
    for (int t = 0; t <= nt; ++t)
      idx.stay_(i, t) = p.AddVariable(Name("z", {i, t}), 0.0, fleet, 0.0, true);
  for (int i = 0; i < nz; ++i)
    for (int t = 0; t < nt; ++t)
      idx.unserved_(i, t) = p.AddVariable(Name("l", {i, t}), 0.0, 1.0, 0.0, true);

  std::vector<Term> terms;

  // Served riders never exceed the cohort's demand.
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j < nz; ++j)
      for (int t0 = 0; t0 < nt; ++t0) {
        if (inst.demand(i, j, t0) <= 0) continue;
        terms.clear();
        for (int rho = t0; rho < nt; ++rho) {
          const int v = idx.serve(i, j, t0, rho);
          if (v >= 0) terms.push_back({v, 1.0});
        }
        p.AddRow(Name("cohort", {i, j, t0}), terms, RowSense::kLessEqual,
                 inst.demand(i, j, t0));
      }

  for (int i = 0; i < nz; ++i)
    p.AddRow(Name("init", {i}), {{idx.stay(i, 0), 1.0}}, RowSense::kEqual, 0.0);

  // Flow balance. Inflows that would have departed before the window are
  // already part of V.
  for (int i = 0; i < nz; ++i)
    for (int t = 0; t < nt; ++t) {
      terms.clear();
      for (int j = 0; j < nz; ++j) {
        for (int t0 = std::max(0, t - s + 1); t0 <= t; ++t0) {
          const int v = idx.serve(i, j, t0, t);
          if (v >= 0) terms.push_back({v, 1.0});
        }
        if (j != i) terms.push_back({idx.reloc(i, j, t), 1.0});
      }
      terms.push_back({idx.stay(i, t + 1), 1.0});
      for (int j = 0; j < nz; ++j) {
        const int depart = t - inst.travel(j, i);
        if (depart < 0) continue;
        for (int t0 = std::max(0, depart - s + 1); t0 <= depart; ++t0) {
          const int v = idx.serve(j, i, t0, depart);
          if (v >= 0) terms.push_back({v, -1.0});
        }
        if (j != i) terms.push_back({idx.reloc(j, i, depart), -1.0});
      }
      terms.push_back({idx.stay(i, t), -1.0});
      p.AddRow(Name("balance", {i, t}), terms, RowSense::kEqual, inst.supply(i, t));
    }

  // Relocation out of a zone only once its alive demand is fully served.
  for (int i = 0; i < nz; ++i)
    for (int t = 0; t < nt; ++t) {
      terms.clear();
      for (int j = 0; j < nz; ++j)
        if (j != i) terms.push_back({idx.reloc(i, j, t), 1.0});
      terms.push_back({idx.unserved(i, t), -static_cast<double>(big_m)});
      p.AddRow(Name("reloc_gate", {i, t}), terms, RowSense::kLessEqual, 0.0);
    }
  for (int i = 0; i < nz; ++i)
    for (int t = 0; t < nt; ++t) {
      // Cohorts t0 with t in phi(t0); the depleted quantity is the cohort's
      // own demand D_ij,t0.
      double alive_demand = 0.0;
      terms.clear();
      for (int j = 0; j < nz; ++j)
        for (int t0 = std::max(0, t - s + 1); t0 <= t; ++t0) {
          const int d = inst.demand(i, j, t0);
          if (d <= 0) continue;
          alive_demand += d;
          for (int rho = t0; rho <= t; ++rho) {
            const int v = idx.serve(i, j, t0, rho);
            if (v >= 0) terms.push_back({v, -1.0});
          }
        }
      if (alive_demand == 0.0) continue;  // 0 <= M (1 - l) holds for any l
      // M must also bound the unserved demand itself, or l = 0 would be
      // infeasible in zones with more demand than vehicles.
      const double gate_m = std::max<double>(big_m, alive_demand);
      terms.push_back({idx.unserved(i, t), gate_m});
      p.AddRow(Name("demand_gate", {i, t}), terms, RowSense::kLessEqual,
               gate_m - alive_demand);
    }
  return model;
}

RelocationPlan extract_first_epoch_plan(const MpcModel& model,
                                        const std::vector<double>& values) {
  const int nz = model.index.zones();
  RelocationPlan plan(nz);
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j < nz; ++j) {
      if (i == j) continue;
      const double v = values[model.index.reloc(i, j, 0)];
      plan.flows(i, j) = std::max(0, static_cast<int>(std::lround(v)));
    }
  return plan;
}

MpcDecision solve_mpc(const MpcInstance& inst, const MilpConfig& solver_cfg) {
  const MpcModel model = build_model(inst);
  MpcDecision decision;
  decision.solution = solve_milp(model.problem, solver_cfg);
  decision.served_by_epoch.assign(inst.epochs(), 0);
  if (!decision.solution.has_solution()) return decision;

  const std::vector<double>& x = decision.solution.values;
  decision.first_epoch_plan = extract_first_epoch_plan(model, x);
  const int nz = inst.zone_count();
  for (int i = 0; i < nz; ++i)
    for (int j = 0; j < nz; ++j)
      for (int t0 = 0; t0 < inst.epochs(); ++t0)
        for (int rho = t0; rho < inst.epochs(); ++rho) {
          const int v = model.index.serve(i, j, t0, rho);
          if (v >= 0) decision.served_by_epoch[rho] += static_cast<int>(std::lround(x[v]));
        }
  return decision;
}

}  // namespace fleetreloc
