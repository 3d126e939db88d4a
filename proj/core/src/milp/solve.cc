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
#include <memory>
#include <queue>
#include <vector>

#include "fleetreloc/milp.h"
#include "milp/simplex.h"

namespace fleetreloc {
namespace {

using internal::Basis;
using internal::BoundedSimplex;
using internal::LpOutcome;
using internal::SteadyClock;

void RequireWellFormed(const MilpProblem& p) {
  const std::vector<std::string> problems = p.Check();
  if (problems.empty()) return;
  std::string msg = "ill-formed problem: " + problems.front();
  if (problems.size() > 1)
    msg += " (+" + std::to_string(problems.size() - 1) + " more)";
  throw ModelError(msg);
}

SteadyClock::time_point DeadlineFrom(SteadyClock::time_point start,
                                     double seconds) {
  if (!std::isfinite(seconds) || seconds > 1e7) return SteadyClock::time_point::max();
  return start + std::chrono::duration_cast<SteadyClock::duration>(
                     std::chrono::duration<double>(std::max(0.0, seconds)));
}

double Elapsed(SteadyClock::time_point start) {
  return std::chrono::duration<double>(SteadyClock::now() - start).count();
}

struct BoundChange {
  int var;
  double lower;
  double upper;
};

struct Node {
  long id = 0;
  int depth = 0;
  double bound = -kInfinity;  // minimization form
  std::vector<BoundChange> changes;
  std::shared_ptr<const Basis> basis;
};

struct BestFirst {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

// Open-node container honoring the configured selection rule.
class NodePool {
 public:
  explicit NodePool(NodeSelection rule) : rule_(rule) {}

  void Push(Node node) {
    if (rule_ == NodeSelection::kBestBound) {
      heap_.push(std::move(node));
    } else {
      stack_.push_back(std::move(node));
    }
  }
  Node Pop() {
    if (rule_ == NodeSelection::kBestBound) {
      Node n = heap_.top();
      heap_.pop();
      return n;
    }
    Node n = std::move(stack_.back());
    stack_.pop_back();
    return n;
  }
  bool empty() const { return heap_.empty() && stack_.empty(); }
  double MinBound() const {
    if (rule_ == NodeSelection::kBestBound)
      return heap_.empty() ? kInfinity : heap_.top().bound;
    double b = kInfinity;
    for (const Node& n : stack_) b = std::min(b, n.bound);
    return b;
  }

 private:
  NodeSelection rule_;
  std::priority_queue<Node, std::vector<Node>, BestFirst> heap_;
  std::vector<Node> stack_;
};

}  // namespace

MilpSolution solve_lp(const MilpProblem& p, const LpConfig& cfg) {
  RequireWellFormed(p);
  const auto start = SteadyClock::now();
  BoundedSimplex lp(p, cfg);
  const LpOutcome outcome = lp.Solve(DeadlineFrom(start, cfg.time_limit_s));

  MilpSolution sol;
  sol.simplex_iterations = lp.iterations();
  sol.nodes = 0;
  switch (outcome) {
    case LpOutcome::kOptimal:
      sol.status = SolveStatus::kOptimal;
      sol.values = lp.primal();
      sol.objective = lp.objective();
      sol.best_bound = sol.objective;
      sol.row_duals = lp.row_duals();
      sol.reduced_costs = lp.reduced_costs();
      break;
    case LpOutcome::kInfeasible:
      sol.status = SolveStatus::kInfeasible;
      break;
    case LpOutcome::kUnbounded:
      sol.status = SolveStatus::kUnbounded;
      sol.best_bound = p.sense() == ObjectiveSense::kMaximize ? kInfinity : -kInfinity;
      break;
    case LpOutcome::kLimit:
      sol.status = SolveStatus::kTimeLimit;
      break;
  }
  sol.wall_seconds = Elapsed(start);
  return sol;
}

MilpSolution solve_milp(const MilpProblem& p, const MilpConfig& cfg) {
  RequireWellFormed(p);
  const auto start = SteadyClock::now();
  const auto deadline = DeadlineFrom(start, cfg.time_limit_s);
  const bool maximize = p.sense() == ObjectiveSense::kMaximize;
  const int n = p.num_vars();

  LpConfig lp_cfg = cfg.lp;
  lp_cfg.time_limit_s = kInfinity;
  BoundedSimplex lp(p, lp_cfg);

  // Root bounds with integer variables snapped inward.
  std::vector<double> root_lower(n), root_upper(n);
  for (int j = 0; j < n; ++j) {
    root_lower[j] = p.lower(j);
    root_upper[j] = p.upper(j);
    if (p.is_integer(j)) {
      root_lower[j] = std::ceil(root_lower[j] - cfg.tol_int);
      root_upper[j] = std::floor(root_upper[j] + cfg.tol_int);
    }
  }

  MilpSolution sol;
  double incumbent = kInfinity;  // minimization form
  std::vector<double> incumbent_x;
  long next_id = 0;
  bool hit_limit = false;
  bool unbounded = false;
  double limit_bound = kInfinity;

  NodePool pool(cfg.node_selection);
  pool.Push(Node{next_id++, 0, -kInfinity, {}, nullptr});

  auto prunable = [&](double bound) {
    if (incumbent == kInfinity) return false;
    const double gap = std::max(1e-9, cfg.relative_gap * std::abs(incumbent));
    return bound >= incumbent - gap;
  };

  // Until the first incumbent, best-bound search runs depth-first (nearer
  // child first) on its own stack; the stack drains into the pool after.
  std::vector<Node> dive;
  auto drain = [&] {
    for (Node& d : dive) pool.Push(std::move(d));
    dive.clear();
  };
  while (!dive.empty() || !pool.empty()) {
    if (SteadyClock::now() > deadline ||
        (cfg.node_limit > 0 && sol.nodes >= cfg.node_limit)) {
      drain();
      hit_limit = true;
      break;
    }
    Node node;
    if (!dive.empty()) {
      node = std::move(dive.back());
      dive.pop_back();
    } else {
      node = pool.Pop();
    }
    if (prunable(node.bound)) continue;

    for (int j = 0; j < n; ++j)
      lp.SetStructuralBounds(j, root_lower[j], root_upper[j]);
    bool empty_box = false;
    for (const BoundChange& c : node.changes) {
      lp.SetStructuralBounds(c.var, c.lower, c.upper);
      if (c.lower > c.upper) empty_box = true;
    }
    if (empty_box) continue;
    if (node.basis) {
      lp.WarmStart(*node.basis);
    } else if (node.id != 0) {
      lp.ColdStart();
    }

    const LpOutcome outcome = lp.Solve(deadline);
    ++sol.nodes;
    if (outcome == LpOutcome::kLimit) {
      hit_limit = true;
      limit_bound = std::min(limit_bound, node.bound);
      drain();
      break;
    }
    if (outcome == LpOutcome::kInfeasible) continue;
    if (outcome == LpOutcome::kUnbounded) {
      unbounded = true;
      break;
    }

    const double obj = maximize ? -lp.objective() : lp.objective();
    if (prunable(obj)) continue;
    const std::vector<double> x = lp.primal();

    // Most fractional integer variable, binaries before general integers,
    // ties to the lowest index.
    int branch_var = -1;
    double best_score = cfg.tol_int;
    bool best_binary = false;
    for (int j = 0; j < n; ++j) {
      if (!p.is_integer(j)) continue;
      const double f = x[j] - std::floor(x[j]);
      const double score = std::min(f, 1.0 - f);
      if (score <= cfg.tol_int) continue;
      const bool binary = root_lower[j] == 0.0 && root_upper[j] == 1.0;
      if ((binary && !best_binary) || (binary == best_binary && score > best_score)) {
        best_score = score;
        best_binary = binary;
        branch_var = j;
      }
    }

    if (branch_var < 0) {
      std::vector<double> rounded = x;
      for (int j = 0; j < n; ++j)
        if (p.is_integer(j)) rounded[j] = std::round(x[j]);
      if (p.MaxViolation(rounded) <= cfg.lp.tol_feas) {
        incumbent_x = std::move(rounded);
      } else {
        incumbent_x = x;
      }
      const double value = p.EvaluateObjective(incumbent_x);
      incumbent = maximize ? -value : value;
      drain();
      continue;
    }

    auto basis = std::make_shared<const Basis>(lp.CurrentBasis());
    const double v = x[branch_var];
    double cur_lo = root_lower[branch_var];
    double cur_up = root_upper[branch_var];
    for (const BoundChange& c : node.changes) {
      if (c.var == branch_var) {
        cur_lo = c.lower;
        cur_up = c.upper;
      }
    }
    Node down{0, node.depth + 1, obj, node.changes, basis};
    down.changes.push_back({branch_var, cur_lo, std::floor(v)});
    Node up{0, node.depth + 1, obj, std::move(node.changes), basis};
    up.changes.push_back({branch_var, std::ceil(v), cur_up});

    // Depth-first explores the nearer side first; best-bound uses ids only
    // to break ties.
    const bool up_first = v - std::floor(v) >= 0.5;
    if (cfg.node_selection == NodeSelection::kDepthFirst && up_first) {
      down.id = next_id++;
      up.id = next_id++;
      pool.Push(std::move(down));
      pool.Push(std::move(up));
    } else if (cfg.node_selection == NodeSelection::kDepthFirst) {
      up.id = next_id++;
      down.id = next_id++;
      pool.Push(std::move(up));
      pool.Push(std::move(down));
    } else {
      down.id = next_id++;
      up.id = next_id++;
      if (incumbent_x.empty()) {
        dive.push_back(up_first ? std::move(down) : std::move(up));
        dive.push_back(up_first ? std::move(up) : std::move(down));
      } else {
        pool.Push(std::move(down));
        pool.Push(std::move(up));
      }
    }
  }

  sol.simplex_iterations = lp.iterations();
  const double sign = maximize ? -1.0 : 1.0;
  if (unbounded) {
    sol.status = SolveStatus::kUnbounded;
    sol.best_bound = maximize ? kInfinity : -kInfinity;
  } else if (hit_limit) {
    const double open = std::min(limit_bound, pool.MinBound());
    const double bound = std::min(open, incumbent);
    sol.best_bound = sign * bound;
    if (!incumbent_x.empty()) {
      sol.status = SolveStatus::kFeasible;
    } else {
      sol.status = SolveStatus::kTimeLimit;
    }
  } else {
    sol.status = incumbent_x.empty() ? SolveStatus::kInfeasible : SolveStatus::kOptimal;
    sol.best_bound = sign * incumbent;
  }
  if (!incumbent_x.empty() && sol.status != SolveStatus::kUnbounded) {
    sol.values = std::move(incumbent_x);
    sol.objective = p.EvaluateObjective(sol.values);
    if (sol.status == SolveStatus::kOptimal) sol.best_bound = sol.objective;
  }
  sol.wall_seconds = Elapsed(start);
  return sol;
}

}  // namespace fleetreloc
