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

#include "fleetreloc/transport.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace fleetreloc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckInput(const TransportProblem& p) {
  const long long s = std::accumulate(p.supply.begin(), p.supply.end(), 0LL);
  const long long d = std::accumulate(p.demand.begin(), p.demand.end(), 0LL);
  if (s != d) {
    throw TransportError("unbalanced transportation problem: supply sums to " +
                         std::to_string(s) + ", demand sums to " + std::to_string(d));
  }
  if (p.cost.rows() != static_cast<int>(p.supply.size()) ||
      p.cost.cols() != static_cast<int>(p.demand.size())) {
    throw TransportError("cost matrix is " + std::to_string(p.cost.rows()) + "x" +
                         std::to_string(p.cost.cols()) + ", margins need " +
                         std::to_string(p.supply.size()) + "x" +
                         std::to_string(p.demand.size()));
  }
  if (p.forbid_diagonal && p.supply.size() != p.demand.size())
    throw TransportError("forbid_diagonal needs a square problem");
  for (int v : p.supply)
    if (v < 0) throw TransportError("negative supply");
  for (int v : p.demand)
    if (v < 0) throw TransportError("negative demand");
  for (double c : p.cost.data())
    if (!std::isfinite(c) || c < 0.0)
      throw TransportError("costs must be finite and non-negative");
}

// Residual network on the active rows and columns. Node order: rows, columns,
// then the sink; the source is implicit (every row with spare supply starts
// at distance 0 plus its potential).
class SspSolver {
 public:
  SspSolver(const TransportProblem& p, std::vector<int> rows, std::vector<int> cols)
      : p_(p), rows_(std::move(rows)), cols_(std::move(cols)),
        nr_(static_cast<int>(rows_.size())), nc_(static_cast<int>(cols_.size())),
        flow_(nr_ * nc_, 0), spare_(nr_), need_(nc_), pi_(nr_ + nc_ + 1, 0.0),
        dist_(nr_ + nc_ + 1), prev_(nr_ + nc_ + 1), done_(nr_ + nc_ + 1) {
    for (int a = 0; a < nr_; ++a) spare_[a] = p.supply[rows_[a]];
    for (int b = 0; b < nc_; ++b) need_[b] = p.demand[cols_[b]];
  }

  void Run(Matrix<int>* flows) {
    int left = std::accumulate(spare_.begin(), spare_.end(), 0);
    while (left > 0) {
      if (!ShortestPath())
        throw TransportError("no feasible flow meets the margins without self arcs");
      left -= Augment();
    }
    for (int a = 0; a < nr_; ++a)
      for (int b = 0; b < nc_; ++b) (*flows)(rows_[a], cols_[b]) = flow_[a * nc_ + b];
  }

 private:
  int Sink() const { return nr_ + nc_; }
  bool Allowed(int a, int b) const {
    return !(p_.forbid_diagonal && rows_[a] == cols_[b]);
  }
  double Cost(int a, int b) const { return p_.cost(rows_[a], cols_[b]); }

  void Relax(int v, double d, int from) {
    if (!done_[v] && d < dist_[v]) {
      dist_[v] = d;
      prev_[v] = from;
    }
  }

  // Dense Dijkstra on reduced costs; ties go to the lowest node index.
  bool ShortestPath() {
    const int n = nr_ + nc_ + 1;
    std::fill(dist_.begin(), dist_.end(), kInf);
    std::fill(prev_.begin(), prev_.end(), -1);
    std::fill(done_.begin(), done_.end(), false);
    for (int a = 0; a < nr_; ++a)
      if (spare_[a] > 0) dist_[a] = 0.0;
    for (;;) {
      int u = -1;
      for (int v = 0; v < n; ++v)
        if (!done_[v] && dist_[v] < kInf && (u < 0 || dist_[v] < dist_[u])) u = v;
      if (u < 0 || u == Sink()) break;
      done_[u] = true;
      if (u < nr_) {
        for (int b = 0; b < nc_; ++b) {
          if (!Allowed(u, b)) continue;
          const double rc = std::max(0.0, Cost(u, b) + pi_[u] - pi_[nr_ + b]);
          Relax(nr_ + b, dist_[u] + rc, u);
        }
      } else {
        const int b = u - nr_;
        for (int a = 0; a < nr_; ++a) {
          if (flow_[a * nc_ + b] == 0) continue;
          const double rc = std::max(0.0, -Cost(a, b) + pi_[u] - pi_[a]);
          Relax(a, dist_[u] + rc, u);
        }
        if (need_[b] > 0) Relax(Sink(), dist_[u] + pi_[u] - pi_[Sink()], u);
      }
    }
    if (!(dist_[Sink()] < kInf)) return false;
    const double cap = dist_[Sink()];
    for (int v = 0; v < n; ++v) pi_[v] += std::min(dist_[v], cap);
    return true;
  }

  // Pushes the bottleneck along the path found last; returns the amount.
  int Augment() {
    int b_last = prev_[Sink()] - nr_;
    int amount = need_[b_last];
    int v = prev_[Sink()];
    while (prev_[v] >= 0) {
      const int u = prev_[v];
      if (v >= nr_ && u < nr_) {
        v = u;  // forward row -> column arc, uncapacitated
        continue;
      }
      amount = std::min(amount, flow_[v * nc_ + (u - nr_)]);
      v = u;
    }
    amount = std::min(amount, spare_[v]);

    need_[b_last] -= amount;
    v = prev_[Sink()];
    while (prev_[v] >= 0) {
      const int u = prev_[v];
      if (u < nr_) {
        flow_[u * nc_ + (v - nr_)] += amount;
      } else {
        flow_[v * nc_ + (u - nr_)] -= amount;
      }
      v = u;
    }
    spare_[v] -= amount;
    return amount;
  }

  const TransportProblem& p_;
  std::vector<int> rows_;
  std::vector<int> cols_;
  int nr_;
  int nc_;
  std::vector<int> flow_;
  std::vector<int> spare_;
  std::vector<int> need_;
  std::vector<double> pi_;
  std::vector<double> dist_;
  std::vector<int> prev_;
  std::vector<bool> done_;
};

}  // namespace

TransportSolution solve_transportation(const TransportProblem& p) {
  CheckInput(p);
  const int n = static_cast<int>(p.supply.size());
  const int m = static_cast<int>(p.demand.size());
  TransportSolution sol;
  sol.flows = Matrix<int>(n, m, 0);

  std::vector<int> rows, cols;
  for (int i = 0; i < n; ++i)
    if (p.supply[i] > 0) rows.push_back(i);
  for (int j = 0; j < m; ++j)
    if (p.demand[j] > 0) cols.push_back(j);
  if (rows.empty()) return sol;

  SspSolver(p, std::move(rows), std::move(cols)).Run(&sol.flows);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) sol.total_cost += sol.flows(i, j) * p.cost(i, j);
  return sol;
}

}  // namespace fleetreloc
