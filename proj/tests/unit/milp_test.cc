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

#include "fleetreloc/milp.h"

#include <cmath>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "oracles.h"

namespace fleetreloc {
namespace {

constexpr double kTol = 1e-7;

// Builds  max c x  s.t.  G x <= h, 0 <= x <= ub  as a MilpProblem.
MilpProblem FromDense(const oracle::DenseLp& lp, const std::vector<double>& ub,
                      bool integer) {
  MilpProblem p(ObjectiveSense::kMaximize);
  for (std::size_t j = 0; j < lp.c.size(); ++j)
    p.AddVariable("x" + std::to_string(j), 0.0, ub[j], lp.c[j], integer);
  for (std::size_t r = 0; r < lp.h.size(); ++r) {
    std::vector<Term> terms;
    for (std::size_t j = 0; j < lp.c.size(); ++j)
      terms.push_back({static_cast<int>(j), lp.g[r][j]});
    p.AddRow("r" + std::to_string(r), terms, RowSense::kLessEqual, lp.h[r]);
  }
  return p;
}

// Appends the box 0 <= x <= ub as explicit inequalities for the oracles.
oracle::DenseLp WithBox(oracle::DenseLp lp, const std::vector<double>& ub) {
  const std::size_t n = lp.c.size();
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> lo_row(n, 0.0), up_row(n, 0.0);
    lo_row[j] = -1.0;
    up_row[j] = 1.0;
    lp.g.push_back(lo_row);
    lp.h.push_back(0.0);
    lp.g.push_back(up_row);
    lp.h.push_back(ub[j]);
  }
  return lp;
}

TEST(SolveLpTest, SingleBindingConstraint) {
  MilpProblem p(ObjectiveSense::kMaximize);
  const int x = p.AddVariable("x", 0.0, 10.0, 1.0, false);
  p.AddRow("cap", {{x, 1.0}}, RowSense::kLessEqual, 3.0);
  const MilpSolution sol = solve_lp(p);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.values[x], 3.0, kTol);
  EXPECT_NEAR(sol.objective, 3.0, kTol);
}

TEST(SolveLpTest, TwoDimensionalPolytopeMatchesVertexEnumeration) {
  const oracle::DenseLp lp{{{1, 1}, {1, 0}}, {4, 2}, {3, 2}};
  const std::vector<double> ub{kInfinity, kInfinity};
  const auto expected = oracle::VertexEnumerationMax(WithBox(lp, {1e6, 1e6}));
  ASSERT_TRUE(expected.has_value());
  EXPECT_NEAR(*expected, 10.0, 1e-9);

  const MilpSolution sol = solve_lp(FromDense(lp, ub, false));
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.objective, *expected, kTol);
  EXPECT_NEAR(sol.values[0], 2.0, kTol);
  EXPECT_NEAR(sol.values[1], 2.0, kTol);
}

TEST(SolveLpTest, DetectsInfeasibility) {
  MilpProblem p(ObjectiveSense::kMaximize);
  const int x = p.AddVariable("x", 0.0, kInfinity, 1.0, false);
  p.AddRow("neg", {{x, 1.0}}, RowSense::kLessEqual, -1.0);
  EXPECT_EQ(solve_lp(p).status, SolveStatus::kInfeasible);
}

TEST(SolveLpTest, DetectsUnboundedness) {
  MilpProblem p(ObjectiveSense::kMaximize);
  const int x = p.AddVariable("x", 0.0, kInfinity, 1.0, false);
  const int y = p.AddVariable("y", 0.0, kInfinity, 1.0, false);
  p.AddRow("diff", {{x, 1.0}, {y, -1.0}}, RowSense::kLessEqual, 1.0);
  EXPECT_EQ(solve_lp(p).status, SolveStatus::kUnbounded);
}

TEST(SolveLpTest, HandlesEqualityAndGreaterRowsAndFreeVariables) {
  // min x + 2y + 0z  s.t.  x + y = 3, x - z >= 1, z free, y <= 5.
  MilpProblem p(ObjectiveSense::kMinimize);
  const int x = p.AddVariable("x", 0.0, kInfinity, 1.0, false);
  const int y = p.AddVariable("y", 0.0, 5.0, 2.0, false);
  const int z = p.AddVariable("z", -kInfinity, kInfinity, 0.0, false);
  p.AddRow("sum", {{x, 1.0}, {y, 1.0}}, RowSense::kEqual, 3.0);
  p.AddRow("gap", {{x, 1.0}, {z, -1.0}}, RowSense::kGreaterEqual, 1.0);
  const MilpSolution sol = solve_lp(p);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 3.0, kTol);
  EXPECT_LE(p.MaxViolation(sol.values), kTol);
}

// Beale's example cycles under Dantzig pricing with naive tie breaking.
TEST(SolveLpTest, TerminatesOnBealeCyclingExample) {
  MilpProblem p(ObjectiveSense::kMinimize);
  const int x4 = p.AddVariable("x4", 0.0, kInfinity, -0.75, false);
  const int x5 = p.AddVariable("x5", 0.0, kInfinity, 20.0, false);
  const int x6 = p.AddVariable("x6", 0.0, kInfinity, -0.5, false);
  const int x7 = p.AddVariable("x7", 0.0, kInfinity, 6.0, false);
  p.AddRow("a", {{x4, 0.25}, {x5, -8.0}, {x6, -1.0}, {x7, 9.0}},
           RowSense::kLessEqual, 0.0);
  p.AddRow("b", {{x4, 0.5}, {x5, -12.0}, {x6, -0.5}, {x7, 3.0}},
           RowSense::kLessEqual, 0.0);
  p.AddRow("c", {{x6, 1.0}}, RowSense::kLessEqual, 1.0);
  const MilpSolution sol = solve_lp(p);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.objective, -1.25, kTol);
}

TEST(SolveLpTest, HighlyDegenerateAssignmentTerminates) {
  // Assignment polytope: every vertex is heavily degenerate.
  const int n = 8;
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> cost(1, 5);
  MilpProblem p(ObjectiveSense::kMinimize);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      p.AddVariable("a" + std::to_string(i) + "_" + std::to_string(j), 0.0,
                    kInfinity, cost(rng), false);
  for (int i = 0; i < n; ++i) {
    std::vector<Term> row, col;
    for (int j = 0; j < n; ++j) {
      row.push_back({i * n + j, 1.0});
      col.push_back({j * n + i, 1.0});
    }
    p.AddRow("r" + std::to_string(i), row, RowSense::kEqual, 1.0);
    p.AddRow("c" + std::to_string(i), col, RowSense::kEqual, 1.0);
  }
  const MilpSolution sol = solve_lp(p);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_LE(p.MaxViolation(sol.values), kTol);
}

TEST(SolveLpTest, OptimalSolutionsAreDualFeasible) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coef(-2.0, 4.0);
  std::uniform_real_distribution<double> rhs(1.0, 10.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 6, m = 5;
    oracle::DenseLp lp;
    for (int j = 0; j < n; ++j) lp.c.push_back(coef(rng));
    for (int r = 0; r < m; ++r) {
      std::vector<double> row;
      for (int j = 0; j < n; ++j) row.push_back(coef(rng));
      lp.g.push_back(row);
      lp.h.push_back(rhs(rng));
    }
    const std::vector<double> ub(n, 5.0);
    const MilpProblem p = FromDense(lp, ub, false);
    const MilpSolution sol = solve_lp(p);
    ASSERT_EQ(sol.status, SolveStatus::kOptimal);
    ASSERT_LE(p.MaxViolation(sol.values), kTol);
    // Maximization: a variable at its lower bound cannot have positive
    // reduced cost, one at its upper bound cannot have negative.
    for (int j = 0; j < n; ++j) {
      const double d = sol.reduced_costs[j];
      const double x = sol.values[j];
      if (x <= p.lower(j) + kTol) {
        EXPECT_LE(d, 1e-7) << "trial " << trial << " var " << j;
      } else if (x >= p.upper(j) - kTol) {
        EXPECT_GE(d, -1e-7) << "trial " << trial << " var " << j;
      } else {
        EXPECT_NEAR(d, 0.0, 1e-7) << "trial " << trial << " var " << j;
      }
    }
    // Row duals of <= rows in a maximization are non-negative.
    for (double y : sol.row_duals) EXPECT_GE(y, -1e-7);
  }
}

TEST(SolveLpTest, RandomLpsMatchVertexEnumeration) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> coef(-3.0, 5.0);
  std::uniform_real_distribution<double> rhs(0.0, 8.0);
  std::uniform_int_distribution<int> dims(2, 3);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = dims(rng), m = dims(rng) + 1;
    oracle::DenseLp lp;
    for (int j = 0; j < n; ++j) lp.c.push_back(coef(rng));
    for (int r = 0; r < m; ++r) {
      std::vector<double> row;
      for (int j = 0; j < n; ++j) row.push_back(coef(rng));
      lp.g.push_back(row);
      lp.h.push_back(rhs(rng));
    }
    const std::vector<double> ub(n, 6.0);
    const auto expected = oracle::VertexEnumerationMax(WithBox(lp, ub));
    const MilpSolution sol = solve_lp(FromDense(lp, ub, false));
    if (!expected) {
      EXPECT_EQ(sol.status, SolveStatus::kInfeasible) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(sol.status, SolveStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(sol.objective, *expected, 1e-6) << "trial " << trial;
  }
}

TEST(SolveMilpTest, KnapsackStyleMatchesIntegerEnumeration) {
  const oracle::DenseLp lp{{{6, 4}, {1, 2}}, {24, 6}, {5, 4}};
  const auto expected = oracle::IntegerBoxMax(lp, {4, 3});
  ASSERT_TRUE(expected.has_value());
  EXPECT_NEAR(*expected, 20.0, 1e-12);

  const MilpProblem p = FromDense(lp, {kInfinity, kInfinity}, true);
  // Integer variables need finite bounds.
  EXPECT_THROW(solve_milp(p), ModelError);

  const MilpSolution sol = solve_milp(FromDense(lp, {4.0, 3.0}, true));
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.objective, *expected, 1e-6);
  EXPECT_NEAR(sol.best_bound, sol.objective, 1e-9);
}

TEST(SolveMilpTest, TotallyUnimodularProblemClosesAtRoot) {
  // 3x3 transportation constraints with integral margins.
  MilpProblem p(ObjectiveSense::kMinimize);
  const double cost[3][3] = {{4, 1, 3}, {2, 5, 2}, {3, 3, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      p.AddVariable("z" + std::to_string(i) + std::to_string(j), 0.0, 10.0,
                    cost[i][j], true);
  const int supply[3] = {3, 4, 2};
  const int demand[3] = {2, 5, 2};
  for (int i = 0; i < 3; ++i) {
    p.AddRow("s" + std::to_string(i),
             {{3 * i, 1.0}, {3 * i + 1, 1.0}, {3 * i + 2, 1.0}}, RowSense::kEqual,
             supply[i]);
    p.AddRow("d" + std::to_string(i), {{i, 1.0}, {3 + i, 1.0}, {6 + i, 1.0}},
             RowSense::kEqual, demand[i]);
  }
  const MilpSolution sol = solve_milp(p);
  ASSERT_EQ(sol.status, SolveStatus::kOptimal);
  EXPECT_EQ(sol.nodes, 1);
  EXPECT_LE(p.MaxIntegralityViolation(sol.values), 1e-9);
}

TEST(SolveMilpTest, InfeasibleIntegerProblem) {
  // 2x = 1 has no integer solution.
  MilpProblem p(ObjectiveSense::kMaximize);
  const int x = p.AddVariable("x", 0.0, 5.0, 1.0, true);
  p.AddRow("half", {{x, 2.0}}, RowSense::kEqual, 1.0);
  EXPECT_EQ(solve_milp(p).status, SolveStatus::kInfeasible);
}

TEST(SolveMilpTest, RandomMilpsMatchEnumerationAndWeakDuality) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> coef(-3, 6);
  std::uniform_int_distribution<int> rhs(2, 15);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 3, m = 3;
    oracle::DenseLp lp;
    for (int j = 0; j < n; ++j) lp.c.push_back(coef(rng) + 0.5);
    for (int r = 0; r < m; ++r) {
      std::vector<double> row;
      for (int j = 0; j < n; ++j) row.push_back(coef(rng));
      lp.g.push_back(row);
      lp.h.push_back(rhs(rng));
    }
    const std::vector<int> ub{4, 4, 4};
    const MilpProblem p = FromDense(lp, {4.0, 4.0, 4.0}, true);
    const auto expected = oracle::IntegerBoxMax(lp, ub);
    ASSERT_TRUE(expected.has_value());  // origin is always feasible
    for (NodeSelection rule : {NodeSelection::kBestBound, NodeSelection::kDepthFirst}) {
      MilpConfig cfg;
      cfg.node_selection = rule;
      const MilpSolution sol = solve_milp(p, cfg);
      ASSERT_EQ(sol.status, SolveStatus::kOptimal) << "trial " << trial;
      EXPECT_NEAR(sol.objective, *expected, 1e-6) << "trial " << trial;
      EXPECT_LE(p.MaxViolation(sol.values), 1e-7);
      EXPECT_LE(p.MaxIntegralityViolation(sol.values), 1e-6);
    }
    const MilpSolution root = solve_lp(p);
    ASSERT_EQ(root.status, SolveStatus::kOptimal);
    EXPECT_GE(root.objective, *expected - 1e-7) << "weak duality, trial " << trial;
  }
}

TEST(SolveMilpTest, DeterministicAcrossRuns) {
  const oracle::DenseLp lp{{{3, 2, 4}, {1, 5, 2}}, {17, 13}, {4, 3, 5}};
  const MilpProblem p = FromDense(lp, {5.0, 5.0, 5.0}, true);
  const MilpSolution a = solve_milp(p);
  const MilpSolution b = solve_milp(p);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.nodes, b.nodes);
}

TEST(SolveMilpTest, NodeLimitWithoutIncumbentReportsTimeLimit) {
  const oracle::DenseLp lp{{{6, 4}, {1, 2}}, {24, 6}, {5, 4}};
  MilpConfig cfg;
  cfg.node_limit = 1;
  const MilpSolution sol = solve_milp(FromDense(lp, {4.0, 3.0}, true), cfg);
  EXPECT_EQ(sol.status, SolveStatus::kTimeLimit);
  EXPECT_FALSE(sol.has_solution());
  EXPECT_GE(sol.best_bound, 20.0 - 1e-9);
}

TEST(WriteLpFormatTest, EmitsSectionsAndIntegrality) {
  MilpProblem p(ObjectiveSense::kMaximize);
  const int x = p.AddVariable("x", 0.0, 4.0, 5.0, true);
  const int l = p.AddVariable("l", 0.0, 1.0, 0.0, true);
  p.AddRow("c1", {{x, 6.0}, {l, -4.0}}, RowSense::kLessEqual, 24.0);
  std::ostringstream os;
  write_lp_format(os, p);
  const std::string text = os.str();
  EXPECT_NE(text.find("Maximize"), std::string::npos);
  EXPECT_NE(text.find("c1: 6 x - 4 l <= 24"), std::string::npos);
  EXPECT_NE(text.find("Generals\n x"), std::string::npos);
  EXPECT_NE(text.find("Binaries\n l"), std::string::npos);
  EXPECT_NE(text.find("End"), std::string::npos);
}

}  // namespace
}  // namespace fleetreloc
