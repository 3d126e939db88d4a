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

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "fleetreloc/milp.h"

namespace fleetreloc {

int MilpProblem::AddVariable(std::string name, double lower, double upper,
                             double objective, bool integer) {
  objective_.push_back(objective);
  lower_.push_back(lower);
  upper_.push_back(upper);
  integer_.push_back(integer);
  var_names_.push_back(std::move(name));
  return num_vars() - 1;
}

int MilpProblem::AddRow(std::string name, std::span<const Term> terms,
                        RowSense sense, double rhs) {
  std::map<int, double> merged;
  for (const Term& t : terms) {
    if (t.var < 0 || t.var >= num_vars()) {
      throw ModelError("row '" + name + "' references unknown variable " +
                       std::to_string(t.var));
    }
    merged[t.var] += t.coef;
  }
  for (const auto& [var, coef] : merged) {
    if (coef != 0.0) terms_.push_back({var, coef});
  }
  row_start_.push_back(static_cast<int>(terms_.size()));
  row_sense_.push_back(sense);
  rhs_.push_back(rhs);
  row_names_.push_back(std::move(name));
  return num_rows() - 1;
}

std::vector<std::string> MilpProblem::Check() const {
  std::vector<std::string> problems;
  for (int j = 0; j < num_vars(); ++j) {
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) || lower_[j] > upper_[j])
      problems.push_back("variable " + var_names_[j] + ": lower > upper");
    if (integer_[j] && (!std::isfinite(lower_[j]) || !std::isfinite(upper_[j])))
      problems.push_back("integer variable " + var_names_[j] +
                         " must have finite bounds");
    if (!std::isfinite(objective_[j]))
      problems.push_back("variable " + var_names_[j] + ": non-finite objective");
  }
  for (int r = 0; r < num_rows(); ++r) {
    if (!std::isfinite(rhs_[r]))
      problems.push_back("row " + row_names_[r] + ": non-finite rhs");
    for (const Term& t : row(r))
      if (!std::isfinite(t.coef))
        problems.push_back("row " + row_names_[r] + ": non-finite coefficient");
  }
  return problems;
}

double MilpProblem::EvaluateObjective(std::span<const double> x) const {
  double v = 0.0;
  for (int j = 0; j < num_vars(); ++j) v += objective_[j] * x[j];
  return v;
}

double MilpProblem::MaxViolation(std::span<const double> x) const {
  double worst = 0.0;
  for (int j = 0; j < num_vars(); ++j) {
    worst = std::max(worst, lower_[j] - x[j]);
    worst = std::max(worst, x[j] - upper_[j]);
  }
  for (int r = 0; r < num_rows(); ++r) {
    double activity = 0.0;
    for (const Term& t : row(r)) activity += t.coef * x[t.var];
    switch (row_sense_[r]) {
      case RowSense::kLessEqual:
        worst = std::max(worst, activity - rhs_[r]);
        break;
      case RowSense::kGreaterEqual:
        worst = std::max(worst, rhs_[r] - activity);
        break;
      case RowSense::kEqual:
        worst = std::max(worst, std::abs(activity - rhs_[r]));
        break;
    }
  }
  return worst;
}

double MilpProblem::MaxIntegralityViolation(std::span<const double> x) const {
  double worst = 0.0;
  for (int j = 0; j < num_vars(); ++j)
    if (integer_[j]) worst = std::max(worst, std::abs(x[j] - std::round(x[j])));
  return worst;
}

const char* ToString(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kTimeLimit: return "time-limit";
  }
  return "unknown";
}

namespace {

// LP format identifiers may not contain most punctuation; the model builders
// in this library only use [A-Za-z0-9_].
void WriteLinear(std::ostream& os, const MilpProblem& p,
                 std::span<const Term> terms) {
  int on_line = 0;
  bool first = true;
  for (const Term& t : terms) {
    if (t.coef == 0.0) continue;
    os << (t.coef < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    const double a = std::abs(t.coef);
    if (a != 1.0) os << a << ' ';
    os << p.var_name(t.var);
    first = false;
    if (++on_line == 8) {
      os << "\n   ";
      on_line = 0;
    }
  }
  if (first) os << "0 " << (p.num_vars() ? p.var_name(0) : "x");
}

}  // namespace

void write_lp_format(std::ostream& os, const MilpProblem& p) {
  const auto old_precision = os.precision(17);
  os << (p.sense() == ObjectiveSense::kMaximize ? "Maximize\n" : "Minimize\n");
  std::vector<Term> obj;
  for (int j = 0; j < p.num_vars(); ++j)
    if (p.objective(j) != 0.0) obj.push_back({j, p.objective(j)});
  os << " obj: ";
  WriteLinear(os, p, obj);
  os << "\nSubject To\n";
  for (int r = 0; r < p.num_rows(); ++r) {
    os << ' ' << p.row_name(r) << ": ";
    WriteLinear(os, p, p.row(r));
    switch (p.row_sense(r)) {
      case RowSense::kLessEqual: os << " <= "; break;
      case RowSense::kGreaterEqual: os << " >= "; break;
      case RowSense::kEqual: os << " = "; break;
    }
    os << p.rhs(r) << '\n';
  }
  os << "Bounds\n";
  for (int j = 0; j < p.num_vars(); ++j) {
    const double lo = p.lower(j);
    const double up = p.upper(j);
    os << ' ';
    if (lo == up) {
      os << p.var_name(j) << " = " << lo;
    } else if (std::isinf(lo) && std::isinf(up)) {
      os << p.var_name(j) << " free";
    } else {
      if (std::isinf(lo)) os << "-inf"; else os << lo;
      os << " <= " << p.var_name(j) << " <= ";
      if (std::isinf(up)) os << "+inf"; else os << up;
    }
    os << '\n';
  }
  std::vector<int> general, binary;
  for (int j = 0; j < p.num_vars(); ++j) {
    if (!p.is_integer(j)) continue;
    (p.lower(j) == 0.0 && p.upper(j) == 1.0 ? binary : general).push_back(j);
  }
  if (!general.empty()) {
    os << "Generals\n";
    for (int j : general) os << ' ' << p.var_name(j) << '\n';
  }
  if (!binary.empty()) {
    os << "Binaries\n";
    for (int j : binary) os << ' ' << p.var_name(j) << '\n';
  }
  os << "End\n";
  os.precision(old_precision);
}

}  // namespace fleetreloc
