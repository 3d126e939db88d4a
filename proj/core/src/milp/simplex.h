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

#ifndef FLEETRELOC_MILP_SIMPLEX_H_
#define FLEETRELOC_MILP_SIMPLEX_H_

#include <chrono>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "fleetreloc/milp.h"

namespace fleetreloc::internal {

using SteadyClock = std::chrono::steady_clock;

enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

// Basis snapshot: which variable sits in each basis position, and where every
// nonbasic variable rests. Variables n..n+m-1 are the row logicals.
struct Basis {
  std::vector<int> head;
  std::vector<VarState> state;
  bool empty() const { return head.empty(); }
};

enum class LpOutcome { kOptimal, kInfeasible, kUnbounded, kLimit };

// Bounded-variable primal revised simplex on A x - r = 0 with an explicit
// dense basis inverse kept up to date by product-form row operations.
// Phase 1 minimizes the sum of bound violations of the basic variables.
class BoundedSimplex {
 public:
  BoundedSimplex(const MilpProblem& p, const LpConfig& cfg);

  int num_structural() const { return n_; }
  int num_rows() const { return m_; }

  void SetStructuralBounds(int j, double lower, double upper);
  void ResetStructuralBounds();
  double structural_lower(int j) const { return lower_[j]; }
  double structural_upper(int j) const { return upper_[j]; }

  // Slack basis: every logical basic.
  void ColdStart();
  void WarmStart(const Basis& basis);
  Basis CurrentBasis() const;

  LpOutcome Solve(SteadyClock::time_point deadline);

  // Objective in the problem's own sense.
  double objective() const;
  std::vector<double> primal() const;
  std::vector<double> row_duals() const;
  std::vector<double> reduced_costs() const;
  long iterations() const { return iterations_; }

 private:
  bool Refactor();
  void ComputeBasicValues();
  void SyncNonbasic();
  bool AnyPrimalInfeasible() const;
  void ComputeDuals(bool phase1);
  double ReducedCost(int j, bool phase1) const;
  int SelectEntering(bool phase1, double* reduced_cost) const;
  void ComputeColumn(int q);
  bool IsEligible(int j, double d) const;

  struct Step {
    int leave_pos = -1;  // -1 with finite theta means a bound flip
    double theta = kInfinity;
    bool leave_to_upper = false;
  };
  Step RatioTest(bool phase1, int q, int dir) const;
  void Pivot(int q, int dir, const Step& step);

  const MilpProblem& problem_;
  LpConfig cfg_;
  int n_ = 0;
  int m_ = 0;
  bool maximize_ = false;

  // Structural columns in compressed-column form.
  std::vector<int> col_start_;
  std::vector<int> col_row_;
  std::vector<double> col_val_;

  std::vector<double> cost_;   // minimization form, size n+m
  std::vector<double> lower_;  // size n+m
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<VarState> state_;
  std::vector<int> head_;

  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> binv_;  // row operations dominate
  Eigen::VectorXd y_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd work_;
  bool factor_valid_ = false;
  int pivots_since_refactor_ = 0;
  long iterations_ = 0;
  long iteration_limit_ = 0;
};

}  // namespace fleetreloc::internal

#endif  // FLEETRELOC_MILP_SIMPLEX_H_
