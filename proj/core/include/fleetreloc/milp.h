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

// Sparse LP/MILP model plus a bounded-variable revised simplex and a
// best-bound branch-and-bound on top of it.
//
// The LP engine works on the computational form A x - r = 0, where every row
// gets a logical variable r bounded by the row sense and right-hand side.
// Pricing is Dantzig; after a run of degenerate pivots it switches to Bland's
// rule until the objective moves again.

#ifndef FLEETRELOC_MILP_H_
#define FLEETRELOC_MILP_H_

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fleetreloc/domain.h"

namespace fleetreloc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ObjectiveSense { kMaximize, kMinimize };
enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

class ModelError : public Error {
 public:
  using Error::Error;
};

struct Term {
  int var;
  double coef;
};

class MilpProblem {
 public:
  explicit MilpProblem(ObjectiveSense sense = ObjectiveSense::kMaximize)
      : sense_(sense) {}

  int AddVariable(std::string name, double lower, double upper,
                  double objective, bool integer);
  // Duplicate variables within a row are merged.
  int AddRow(std::string name, std::span<const Term> terms, RowSense sense,
             double rhs);
  int AddRow(std::string name, std::initializer_list<Term> terms,
             RowSense sense, double rhs) {
    return AddRow(std::move(name), std::span<const Term>(terms.begin(), terms.size()),
                  sense, rhs);
  }

  void set_sense(ObjectiveSense s) { sense_ = s; }
  void set_objective(int var, double coef) { objective_[var] = coef; }
  void set_bounds(int var, double lower, double upper) {
    lower_[var] = lower;
    upper_[var] = upper;
  }

  ObjectiveSense sense() const { return sense_; }
  int num_vars() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rhs_.size()); }

  double objective(int var) const { return objective_[var]; }
  double lower(int var) const { return lower_[var]; }
  double upper(int var) const { return upper_[var]; }
  bool is_integer(int var) const { return integer_[var]; }
  const std::string& var_name(int var) const { return var_names_[var]; }

  std::span<const Term> row(int r) const {
    return {terms_.data() + row_start_[r],
            static_cast<std::size_t>(row_start_[r + 1] - row_start_[r])};
  }
  RowSense row_sense(int r) const { return row_sense_[r]; }
  double rhs(int r) const { return rhs_[r]; }
  const std::string& row_name(int r) const { return row_names_[r]; }

  // Structural problems with the model, empty when well-formed.
  std::vector<std::string> Check() const;

  double EvaluateObjective(std::span<const double> x) const;
  // Largest absolute violation of any row or bound.
  double MaxViolation(std::span<const double> x) const;
  // Largest distance of an integer variable from the nearest integer.
  double MaxIntegralityViolation(std::span<const double> x) const;

 private:
  ObjectiveSense sense_;
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<bool> integer_;
  std::vector<std::string> var_names_;

  std::vector<int> row_start_{0};
  std::vector<Term> terms_;
  std::vector<RowSense> row_sense_;
  std::vector<double> rhs_;
  std::vector<std::string> row_names_;
};

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kUnbounded, kTimeLimit };

const char* ToString(SolveStatus s);

struct MilpSolution {
  SolveStatus status = SolveStatus::kTimeLimit;
  std::vector<double> values;  // empty when no solution is available
  double objective = 0.0;
  // Best proven bound on the optimum, in the problem's sense.
  double best_bound = 0.0;
  long nodes = 0;
  long simplex_iterations = 0;
  double wall_seconds = 0.0;
  // LP solves only: row duals and structural reduced costs, both expressed
  // for the problem's own objective sense (d_j = c_j - y^T a_j).
  std::vector<double> row_duals;
  std::vector<double> reduced_costs;

  bool has_solution() const { return !values.empty(); }
};

struct LpConfig {
  double tol_feas = 1e-7;
  double tol_dual = 1e-9;
  double tol_pivot = 1e-9;
  // 0 picks 20 * (rows + columns) + 1000.
  long iteration_limit = 0;
  int degeneracy_streak = 50;
  int refactor_period = 100;
  double time_limit_s = kInfinity;
};

enum class NodeSelection { kBestBound, kDepthFirst };

struct MilpConfig {
  double time_limit_s = kInfinity;
  double tol_int = 1e-6;
  NodeSelection node_selection = NodeSelection::kBestBound;
  // 0 means unlimited.
  long node_limit = 0;
  // Nodes whose bound is within this relative distance of the incumbent are
  // pruned. 0 asks for a proven optimum.
  double relative_gap = 0.0;
  LpConfig lp;
};

// Solves the continuous relaxation (integrality ignored).
MilpSolution solve_lp(const MilpProblem& p, const LpConfig& cfg = {});
MilpSolution solve_milp(const MilpProblem& p, const MilpConfig& cfg = {});

// CPLEX LP text format, for cross-checking against external solvers.
void write_lp_format(std::ostream& os, const MilpProblem& p);

}  // namespace fleetreloc

#endif  // FLEETRELOC_MILP_H_
