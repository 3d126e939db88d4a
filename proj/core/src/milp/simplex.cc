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

#include "milp/simplex.h"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace fleetreloc::internal {
namespace {

constexpr double kDegenerateStep = 1e-12;
// Bases with max|P| * max|P^-1| above this count as singular.
constexpr double kMaxCondition = 1e12;

}  // namespace

BoundedSimplex::BoundedSimplex(const MilpProblem& p, const LpConfig& cfg)
    : problem_(p), cfg_(cfg), n_(p.num_vars()), m_(p.num_rows()),
      maximize_(p.sense() == ObjectiveSense::kMaximize) {
  // Transpose the row-wise model into columns.
  std::vector<int> count(n_ + 1, 0);
  for (int r = 0; r < m_; ++r)
    for (const Term& t : p.row(r)) ++count[t.var + 1];
  col_start_.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + count[j + 1];
  col_row_.resize(col_start_[n_]);
  col_val_.resize(col_start_[n_]);
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int r = 0; r < m_; ++r) {
    for (const Term& t : p.row(r)) {
      col_row_[fill[t.var]] = r;
      col_val_[fill[t.var]] = t.coef;
      ++fill[t.var];
    }
  }

  const int total = n_ + m_;
  cost_.assign(total, 0.0);
  lower_.assign(total, 0.0);
  upper_.assign(total, 0.0);
  for (int j = 0; j < n_; ++j)
    cost_[j] = maximize_ ? -p.objective(j) : p.objective(j);
  ResetStructuralBounds();
  for (int r = 0; r < m_; ++r) {
    const int k = n_ + r;
    switch (p.row_sense(r)) {
      case RowSense::kLessEqual:
        lower_[k] = -kInfinity;
        upper_[k] = p.rhs(r);
        break;
      case RowSense::kGreaterEqual:
        lower_[k] = p.rhs(r);
        upper_[k] = kInfinity;
        break;
      case RowSense::kEqual:
        lower_[k] = upper_[k] = p.rhs(r);
        break;
    }
  }
  iteration_limit_ = cfg_.iteration_limit > 0
                         ? cfg_.iteration_limit
                         : 20L * (n_ + m_) + 1000;
  binv_.resize(m_, m_);
  y_.resize(m_);
  alpha_.resize(m_);
  work_.resize(m_);
  ColdStart();
}

void BoundedSimplex::SetStructuralBounds(int j, double lower, double upper) {
  lower_[j] = lower;
  upper_[j] = upper;
}

void BoundedSimplex::ResetStructuralBounds() {
  for (int j = 0; j < n_; ++j) {
    lower_[j] = problem_.lower(j);
    upper_[j] = problem_.upper(j);
  }
}

void BoundedSimplex::ColdStart() {
  const int total = n_ + m_;
  x_.assign(total, 0.0);
  state_.assign(total, VarState::kAtLower);
  head_.resize(m_);
  for (int r = 0; r < m_; ++r) {
    head_[r] = n_ + r;
    state_[n_ + r] = VarState::kBasic;
  }
  for (int j = 0; j < n_; ++j) {
    if (std::isfinite(lower_[j])) {
      state_[j] = VarState::kAtLower;
    } else if (std::isfinite(upper_[j])) {
      state_[j] = VarState::kAtUpper;
    } else {
      state_[j] = VarState::kFree;
    }
  }
  binv_.setZero();
  binv_.diagonal().setConstant(-1.0);
  factor_valid_ = true;
  pivots_since_refactor_ = 0;
}

void BoundedSimplex::WarmStart(const Basis& basis) {
  if (basis.empty()) {
    ColdStart();
    return;
  }
  const bool same_head = factor_valid_ && basis.head == head_;
  head_ = basis.head;
  state_ = basis.state;
  if (!same_head) factor_valid_ = false;
}

Basis BoundedSimplex::CurrentBasis() const { return Basis{head_, state_}; }

// Basis inverse by blocks. With K the basic structural columns, L the rows
// whose logical is basic and S the remaining rows (|S| = |K|), the basis is
// [[P, 0], [Q, -I]] with P = A[S, K], Q = A[L, K], hence
// B^-1 = [[P^-1, 0], [Q P^-1, -I]]. Only P needs a dense factorization.
bool BoundedSimplex::Refactor() {
  std::vector<int> kpos;
  std::vector<int> row_slot(m_, -1);  // index into S, or -1 when in L
  std::vector<int> logical_pos(m_, -1);
  for (int r = 0; r < m_; ++r) {
    const int v = head_[r];
    if (v < n_) {
      kpos.push_back(r);
    } else {
      logical_pos[v - n_] = r;
    }
  }
  std::vector<int> srows;
  for (int row = 0; row < m_; ++row) {
    if (logical_pos[row] < 0) {
      row_slot[row] = static_cast<int>(srows.size());
      srows.push_back(row);
    }
  }
  const int k = static_cast<int>(kpos.size());
  if (static_cast<int>(srows.size()) != k) return false;

  binv_.setZero();
  for (int row = 0; row < m_; ++row)
    if (logical_pos[row] >= 0) binv_(logical_pos[row], row) = -1.0;

  if (k > 0) {
    // Basis columns hold a handful of entries, so a sparse LU keeps the
    // factorization far below the dense k^3.
    std::vector<Eigen::Triplet<double>> entries;
    for (int a = 0; a < k; ++a) {
      const int col = head_[kpos[a]];
      for (int e = col_start_[col]; e < col_start_[col + 1]; ++e) {
        const int slot = row_slot[col_row_[e]];
        if (slot >= 0) entries.emplace_back(slot, a, col_val_[e]);
      }
    }
    Eigen::SparseMatrix<double> pmat(k, k);
    pmat.setFromTriplets(entries.begin(), entries.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(pmat);
    lu.factorize(pmat);
    if (lu.info() != Eigen::Success) return false;
    const Eigen::MatrixXd pinv = lu.solve(Eigen::MatrixXd::Identity(k, k));
    if (lu.info() != Eigen::Success || !pinv.allFinite() ||
        pinv.cwiseAbs().maxCoeff() * pmat.coeffs().cwiseAbs().maxCoeff() > kMaxCondition)
      return false;
    for (int b = 0; b < k; ++b)
      for (int a = 0; a < k; ++a) binv_(kpos[a], srows[b]) = pinv(a, b);
    // Logical rows: (Q P^-1)[l, S].
    for (int a = 0; a < k; ++a) {
      const int col = head_[kpos[a]];
      for (int e = col_start_[col]; e < col_start_[col + 1]; ++e) {
        const int row = col_row_[e];
        const int lp = logical_pos[row];
        if (lp < 0) continue;
        const double v = col_val_[e];
        for (int b = 0; b < k; ++b) binv_(lp, srows[b]) += v * pinv(a, b);
      }
    }
  }
  factor_valid_ = true;
  pivots_since_refactor_ = 0;
  return true;
}

void BoundedSimplex::SyncNonbasic() {
  for (int j = 0; j < n_ + m_; ++j) {
    VarState& s = state_[j];
    if (s == VarState::kBasic) continue;
    const bool lo_ok = std::isfinite(lower_[j]);
    const bool up_ok = std::isfinite(upper_[j]);
    if (s == VarState::kAtUpper && !up_ok) s = VarState::kAtLower;
    if (s == VarState::kAtLower && !lo_ok) s = up_ok ? VarState::kAtUpper : VarState::kFree;
    if (s == VarState::kFree && (lo_ok || up_ok))
      s = lo_ok ? VarState::kAtLower : VarState::kAtUpper;
    switch (s) {
      case VarState::kAtLower: x_[j] = lower_[j]; break;
      case VarState::kAtUpper: x_[j] = upper_[j]; break;
      case VarState::kFree: x_[j] = 0.0; break;
      case VarState::kBasic: break;
    }
  }
}

void BoundedSimplex::ComputeBasicValues() {
  work_.setZero();
  for (int j = 0; j < n_; ++j) {
    if (state_[j] == VarState::kBasic || x_[j] == 0.0) continue;
    for (int e = col_start_[j]; e < col_start_[j + 1]; ++e)
      work_[col_row_[e]] -= col_val_[e] * x_[j];
  }
  for (int r = 0; r < m_; ++r) {
    const int k = n_ + r;
    if (state_[k] != VarState::kBasic) work_[r] += x_[k];
  }
  alpha_.noalias() = binv_ * work_;
  for (int r = 0; r < m_; ++r) x_[head_[r]] = alpha_[r];
}

bool BoundedSimplex::AnyPrimalInfeasible() const {
  for (int r = 0; r < m_; ++r) {
    const int b = head_[r];
    if (x_[b] < lower_[b] - cfg_.tol_feas || x_[b] > upper_[b] + cfg_.tol_feas)
      return true;
  }
  return false;
}

void BoundedSimplex::ComputeDuals(bool phase1) {
  for (int r = 0; r < m_; ++r) {
    const int b = head_[r];
    if (phase1) {
      if (x_[b] < lower_[b] - cfg_.tol_feas) {
        work_[r] = -1.0;
      } else if (x_[b] > upper_[b] + cfg_.tol_feas) {
        work_[r] = 1.0;
      } else {
        work_[r] = 0.0;
      }
    } else {
      work_[r] = cost_[b];
    }
  }
  // y = B^-T c_B, summed over the non-zero basic costs only.
  y_.setZero();
  for (int r = 0; r < m_; ++r)
    if (work_[r] != 0.0) y_.noalias() += work_[r] * binv_.row(r).transpose();
}

double BoundedSimplex::ReducedCost(int j, bool phase1) const {
  if (j >= n_) return y_[j - n_];
  double d = phase1 ? 0.0 : cost_[j];
  for (int e = col_start_[j]; e < col_start_[j + 1]; ++e)
    d -= y_[col_row_[e]] * col_val_[e];
  return d;
}

bool BoundedSimplex::IsEligible(int j, double d) const {
  switch (state_[j]) {
    case VarState::kAtLower:
      return d < -cfg_.tol_dual && upper_[j] > lower_[j];
    case VarState::kAtUpper:
      return d > cfg_.tol_dual && upper_[j] > lower_[j];
    case VarState::kFree:
      return std::abs(d) > cfg_.tol_dual;
    case VarState::kBasic:
      return false;
  }
  return false;
}

void BoundedSimplex::ComputeColumn(int q) {
  if (q >= n_) {
    alpha_ = -binv_.col(q - n_);
    return;
  }
  alpha_.setZero();
  for (int e = col_start_[q]; e < col_start_[q + 1]; ++e)
    alpha_.noalias() += col_val_[e] * binv_.col(col_row_[e]);
}

BoundedSimplex::Step BoundedSimplex::RatioTest(bool phase1, int q,
                                               int dir) const {
  Step step;
  const double tol = cfg_.tol_feas;
  double flip = kInfinity;
  if (std::isfinite(lower_[q]) && std::isfinite(upper_[q]))
    flip = upper_[q] - lower_[q];

  // Per basic position: exact ratio, relaxed ratio, and the bound it hits.
  auto ratios = [&](int r, double* exact, double* relaxed, bool* to_upper) {
    const double g = -dir * alpha_[r];
    const int b = head_[r];
    const double xb = x_[b];
    const double lo = lower_[b];
    const double up = upper_[b];
    *exact = *relaxed = kInfinity;
    const bool below = phase1 && xb < lo - tol;
    const bool above = phase1 && xb > up + tol;
    if (below) {
      if (g > 0) {
        *exact = (lo - xb) / g;
        *relaxed = (lo - xb + tol) / g;
        *to_upper = false;
      }
    } else if (above) {
      if (g < 0) {
        *exact = (xb - up) / -g;
        *relaxed = (xb - up + tol) / -g;
        *to_upper = true;
      }
    } else if (g < 0 && std::isfinite(lo)) {
      *exact = std::max(0.0, xb - lo) / -g;
      *relaxed = (xb - lo + tol) / -g;
      *to_upper = false;
    } else if (g > 0 && std::isfinite(up)) {
      *exact = std::max(0.0, up - xb) / g;
      *relaxed = (up - xb + tol) / g;
      *to_upper = true;
    }
  };

  // Harris two-pass: the largest pivot among ratios within the relaxed bound.
  double relaxed_min = kInfinity;
  for (int r = 0; r < m_; ++r) {
    if (std::abs(alpha_[r]) <= cfg_.tol_pivot) continue;
    double exact, relaxed;
    bool to_upper = false;
    ratios(r, &exact, &relaxed, &to_upper);
    relaxed_min = std::min(relaxed_min, relaxed);
  }

  double best_pivot = 0.0;
  for (int r = 0; r < m_; ++r) {
    const double a = std::abs(alpha_[r]);
    if (a <= cfg_.tol_pivot) continue;
    double exact, relaxed;
    bool to_upper = false;
    ratios(r, &exact, &relaxed, &to_upper);
    if (exact > relaxed_min) continue;
    if (a > best_pivot) {
      best_pivot = a;
      step.leave_pos = r;
      step.theta = exact;
      step.leave_to_upper = to_upper;
    }
  }

  if (flip <= step.theta) {
    step.leave_pos = -1;
    step.theta = flip;
  }
  return step;
}

void BoundedSimplex::Pivot(int q, int dir, const Step& step) {
  const double theta = step.theta;
  if (theta != 0.0) {
    x_[q] += dir * theta;
    for (int r = 0; r < m_; ++r) x_[head_[r]] -= dir * alpha_[r] * theta;
  }
  if (step.leave_pos < 0) {
    state_[q] = dir > 0 ? VarState::kAtUpper : VarState::kAtLower;
    x_[q] = dir > 0 ? upper_[q] : lower_[q];
    return;
  }
  const int r = step.leave_pos;
  const int b = head_[r];
  state_[b] = step.leave_to_upper ? VarState::kAtUpper : VarState::kAtLower;
  x_[b] = step.leave_to_upper ? upper_[b] : lower_[b];
  head_[r] = q;
  state_[q] = VarState::kBasic;

  // Product-form update of the inverse: eliminate alpha against row r.
  const double pivot = alpha_[r];
  binv_.row(r) /= pivot;
  alpha_[r] = 0.0;
  for (int k = 0; k < m_; ++k)
    if (alpha_[k] != 0.0) binv_.row(k).noalias() -= alpha_[k] * binv_.row(r);
  ++pivots_since_refactor_;
}

LpOutcome BoundedSimplex::Solve(SteadyClock::time_point deadline) {
  SyncNonbasic();
  if (!factor_valid_ && !Refactor()) {
    ColdStart();
    SyncNonbasic();
  }
  ComputeBasicValues();

  int degenerate_run = 0;
  bool bland = false;
  int verifications = 0;
  // Phase-2 duals are updated per pivot and recomputed after every
  // refactorization.
  bool duals_current = false;
  const long start_iterations = iterations_;
  for (;;) {
    if (iterations_ - start_iterations >= iteration_limit_) return LpOutcome::kLimit;
    if ((iterations_ & 15) == 0 && SteadyClock::now() > deadline)
      return LpOutcome::kLimit;

    const bool phase1 = AnyPrimalInfeasible();
    if (phase1 || !duals_current) ComputeDuals(phase1);
    duals_current = !phase1;

    int q = -1;
    double dq = 0.0;
    if (bland) {
      for (int j = 0; j < n_ + m_; ++j) {
        if (state_[j] == VarState::kBasic) continue;
        const double d = ReducedCost(j, phase1);
        if (IsEligible(j, d)) {
          q = j;
          dq = d;
          break;
        }
      }
    } else {
      double best = 0.0;
      for (int j = 0; j < n_ + m_; ++j) {
        if (state_[j] == VarState::kBasic) continue;
        const double d = ReducedCost(j, phase1);
        if (IsEligible(j, d) && std::abs(d) > best) {
          best = std::abs(d);
          q = j;
          dq = d;
        }
      }
    }

    if (q < 0) {
      // Confirm on a fresh factorization before concluding.
      if (pivots_since_refactor_ > 0 && verifications < 3) {
        ++verifications;
        if (!Refactor()) return LpOutcome::kLimit;
        ComputeBasicValues();
        duals_current = false;
        continue;
      }
      return phase1 ? LpOutcome::kInfeasible : LpOutcome::kOptimal;
    }

    const int dir = dq < 0 ? 1 : -1;
    ComputeColumn(q);
    Step step;
    if (bland) {
      // Textbook minimum ratio, ties to the lowest variable index.
      const double tol = cfg_.tol_feas;
      double flip = kInfinity;
      if (std::isfinite(lower_[q]) && std::isfinite(upper_[q]))
        flip = upper_[q] - lower_[q];
      for (int r = 0; r < m_; ++r) {
        if (std::abs(alpha_[r]) <= cfg_.tol_pivot) continue;
        const double g = -dir * alpha_[r];
        const int b = head_[r];
        double ratio = kInfinity;
        bool to_upper = false;
        const bool below = phase1 && x_[b] < lower_[b] - tol;
        const bool above = phase1 && x_[b] > upper_[b] + tol;
        if (below) {
          if (g > 0) ratio = (lower_[b] - x_[b]) / g;
        } else if (above) {
          if (g < 0) {
            ratio = (x_[b] - upper_[b]) / -g;
            to_upper = true;
          }
        } else if (g < 0 && std::isfinite(lower_[b])) {
          ratio = std::max(0.0, x_[b] - lower_[b]) / -g;
        } else if (g > 0 && std::isfinite(upper_[b])) {
          ratio = std::max(0.0, upper_[b] - x_[b]) / g;
          to_upper = true;
        }
        if (ratio == kInfinity) continue;
        const bool better =
            ratio < step.theta - kDegenerateStep ||
            (ratio <= step.theta + kDegenerateStep && step.leave_pos >= 0 &&
             b < head_[step.leave_pos]);
        if (step.leave_pos < 0 || better) {
          step.leave_pos = r;
          step.theta = ratio;
          step.leave_to_upper = to_upper;
        }
      }
      if (flip <= step.theta) {
        step.leave_pos = -1;
        step.theta = flip;
      }
    } else {
      step = RatioTest(phase1, q, dir);
    }

    if (step.theta == kInfinity) {
      if (!phase1) return LpOutcome::kUnbounded;
      // A phase-1 direction always hits an infeasible basic; a miss is
      // numerical noise in the inverse.
      if (verifications++ >= 3 || !Refactor()) return LpOutcome::kLimit;
      ComputeBasicValues();
      duals_current = false;
      continue;
    }

    Pivot(q, dir, step);
    ++iterations_;
    // y' = y + d_q * (row r of the updated inverse).
    if (duals_current && step.leave_pos >= 0)
      y_.noalias() += dq * binv_.row(step.leave_pos).transpose();

    if (step.theta <= kDegenerateStep) {
      if (++degenerate_run >= cfg_.degeneracy_streak) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
    if (pivots_since_refactor_ >= cfg_.refactor_period) {
      if (!Refactor()) return LpOutcome::kLimit;
      ComputeBasicValues();
      duals_current = false;
    }
  }
}

double BoundedSimplex::objective() const {
  double v = 0.0;
  for (int j = 0; j < n_; ++j) v += cost_[j] * x_[j];
  return maximize_ ? -v : v;
}

std::vector<double> BoundedSimplex::primal() const {
  return std::vector<double>(x_.begin(), x_.begin() + n_);
}

std::vector<double> BoundedSimplex::row_duals() const {
  std::vector<double> out(m_);
  for (int r = 0; r < m_; ++r) out[r] = maximize_ ? -y_[r] : y_[r];
  return out;
}

std::vector<double> BoundedSimplex::reduced_costs() const {
  std::vector<double> out(n_);
  for (int j = 0; j < n_; ++j) {
    const double d = ReducedCost(j, false);
    out[j] = maximize_ ? -d : d;
  }
  return out;
}

}  // namespace fleetreloc::internal
