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

// The rolling-horizon relocation model. Epoch arguments of phi, weight_qp and
// weight_qr are 1-based, the way the weights are usually written down; the
// variable index and everything else in this header is 0-based.
//
// Variables:
//   serve(i, j, t0, rho)  vehicles starting at rho to serve the riders i->j
//                         that arrived at t0; rho ranges over phi(t0)
//   reloc(i, j, t)        vehicles starting to relocate i->j at t, i != j
//   stay(i, t)            vehicles staying in i from t-1 to t, t = 0..T
//   unserved(i, t)        1 when demand in i may remain unserved after t
//
// maximize  sum qp(t0, rho) W_ij serve - sum qr_ij(t) reloc  subject to
//   cohort:   sum_rho serve(i, j, t0, rho) <= D_ij,t0
//   init:     stay(i, 0) = 0
//   balance:  departures(i, t) + stay(i, t+1) = arrivals(i, t) + stay(i, t) + V_it
//   reloc_gate:  sum_j reloc(i, j, t) <= M unserved(i, t)
//   demand_gate: sum over alive cohorts of (D - served so far) <= M (1 - unserved(i, t))

#ifndef FLEETRELOC_MPC_H_
#define FLEETRELOC_MPC_H_

#include <optional>
#include <vector>

#include "fleetreloc/domain.h"
#include "fleetreloc/milp.h"

namespace fleetreloc {

// Valid pick-up epochs {rho : t <= rho <= min(t + s - 1, T)}, 1-based.
std::vector<int> phi(int t, int s, int horizon);

// qp_base^t * qp_decay^(rho - t), 1-based epochs.
double weight_qp(int t, int rho, const WeightConfig& cfg);
// qr_scale * qr_base^t * eta, 1-based epoch.
double weight_qr(int t, double travel_seconds, const WeightConfig& cfg);

struct MpcModel;
MpcModel build_model(const MpcInstance& inst);

// Maps model variables to MILP columns. -1 marks variables that do not exist
// (no demand for the cohort, or a self relocation).
class MpcVariableIndex {
 public:
  MpcVariableIndex() = default;
  MpcVariableIndex(int zones, int epochs, int max_wait);

  int zones() const { return zones_; }
  int epochs() const { return epochs_; }
  int max_wait() const { return max_wait_; }

  int serve(int i, int j, int t0, int rho) const;
  int reloc(int i, int j, int t) const { return reloc_(i * zones_ + j, t); }
  int stay(int i, int t) const { return stay_(i, t); }
  int unserved(int i, int t) const { return unserved_(i, t); }

  int num_serve() const { return count_serve_; }
  int num_reloc() const { return count_reloc_; }
  int num_stay() const { return zones_ * (epochs_ + 1); }
  int num_unserved() const { return zones_ * epochs_; }
  int num_columns() const {
    return num_serve() + num_reloc() + num_stay() + num_unserved();
  }

 private:
  friend MpcModel build_model(const MpcInstance& inst);
  int zones_ = 0;
  int epochs_ = 0;
  int max_wait_ = 1;
  // serve_[(i*Z + j)*T + t0][rho - t0]
  std::vector<std::vector<int>> serve_;
  Matrix<int> reloc_;
  Matrix<int> stay_;
  Matrix<int> unserved_;
  int count_serve_ = 0;
  int count_reloc_ = 0;
};

struct MpcModel {
  MilpProblem problem;
  MpcVariableIndex index;
};

// Throws ModelError naming the offending field family when the instance does
// not validate.
MpcModel build_model(const MpcInstance& inst);

struct MpcDecision {
  // Unset when the solver returned no incumbent; callers relocate nothing.
  std::optional<RelocationPlan> first_epoch_plan;
  MilpSolution solution;
  // Vehicles starting a rider trip in each epoch.
  std::vector<int> served_by_epoch;
};

MpcDecision solve_mpc(const MpcInstance& inst, const MilpConfig& solver_cfg = {});

// First-epoch relocations of a solved model, rounded at tol_int.
RelocationPlan extract_first_epoch_plan(const MpcModel& model,
                                        const std::vector<double>& values);

}  // namespace fleetreloc

#endif  // FLEETRELOC_MPC_H_
