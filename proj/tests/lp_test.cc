// Copyright 2026 The cpac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cpac/lp.h"

#include <cmath>

#include <gtest/gtest.h>

#include "cpac/errors.h"
#include "cpac/verify/oracles.h"
#include "cpac/verify/random.h"

namespace cpac {
namespace {

LinearProgram make_lp(std::vector<double> c,
                      std::vector<std::vector<double>> a,
                      std::vector<double> b) {
  LinearProgram lp;
  lp.costs = std::move(c);
  lp.constraint_matrix = std::move(a);
  lp.rhs = std::move(b);
  return lp;
}

// Primal feasibility, dual feasibility and a zero duality gap.
void expect_certificate(const LinearProgram& lp, const LpSolution& s,
                        double tol = 1e-7) {
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  ASSERT_EQ(s.x.size(), lp.num_variables());
  ASSERT_EQ(s.dual.size(), lp.num_rows());
  double primal = 0.0, dual = 0.0;
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    EXPECT_GE(s.x[j], -tol);
    primal += lp.costs[j] * s.x[j];
  }
  for (std::size_t r = 0; r < lp.num_rows(); ++r) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
      lhs += lp.constraint_matrix[r][j] * s.x[j];
    }
    EXPECT_GE(lhs, lp.rhs[r] - tol) << "row " << r;
    EXPECT_GE(s.dual[r], -tol);
    dual += lp.rhs[r] * s.dual[r];
  }
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    double col = 0.0;
    for (std::size_t r = 0; r < lp.num_rows(); ++r) {
      col += lp.constraint_matrix[r][j] * s.dual[r];
    }
    EXPECT_LE(col, lp.costs[j] + tol) << "column " << j;
  }
  EXPECT_NEAR(primal, s.objective, tol);
  EXPECT_NEAR(dual, s.objective, tol * (1 + std::abs(s.objective)));
}

TEST(SolveLp, SingleBound) {
  const auto lp = make_lp({1.0}, {{1.0}}, {3.0});
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.x[0], 3.0, 1e-12);
  EXPECT_NEAR(s.objective, 3.0, 1e-12);
  expect_certificate(lp, s);
}

// The optimal face is the segment x + y = 1, x in [0.5, 1]; (0.5, 0.5) is one
// of its vertices. Only the objective is pinned down.
TEST(SolveLp, TwoVariableExample) {
  const auto lp = make_lp({1.0, 1.0}, {{1.0, 1.0}, {2.0, 1.0}}, {1.0, 1.5});
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-12);
  const auto v = verify::vertex_enumeration(lp);
  ASSERT_TRUE(v.has_value());
  EXPECT_NEAR(v->objective, 1.0, 1e-12);
  expect_certificate(lp, s);
}

TEST(SolveLp, Infeasible) {
  const auto lp = make_lp({1.0}, {{1.0}, {-1.0}}, {1.0, 0.0});
  EXPECT_EQ(solve_lp(lp).status, LpStatus::kInfeasible);
}

TEST(SolveLp, Unbounded) {
  const auto lp = make_lp({-1.0, 1.0}, {{1.0, 0.0}}, {1.0});
  EXPECT_EQ(solve_lp(lp).status, LpStatus::kUnbounded);
}

TEST(SolveLp, NoRows) {
  const auto lp = make_lp({2.0, 3.0}, {}, {});
  const LpSolution s = solve_lp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_EQ(s.objective, 0.0);
  EXPECT_EQ(s.x, (std::vector<double>{0.0, 0.0}));
}

TEST(SolveLp, NonPositiveRhsRowsAreSlack) {
  const auto lp = make_lp({1.0, 1.0}, {{1.0, 1.0}, {-1.0, 2.0}}, {2.0, -4.0});
  const LpSolution s = solve_lp(lp);
  EXPECT_NEAR(s.objective, 2.0, 1e-12);
  expect_certificate(lp, s);
}

TEST(SolveLp, DegenerateDuplicatedRows) {
  // Many copies of the same constraint make every pivot degenerate.
  std::vector<std::vector<double>> a(12, {1.0, 2.0, 1.0});
  std::vector<double> b(12, 4.0);
  a.push_back({2.0, 1.0, 1.0});
  b.push_back(4.0);
  const auto lp = make_lp({1.0, 1.0, 1.0}, a, b);
  const LpSolution s = solve_lp(lp);
  EXPECT_NEAR(s.objective, 8.0 / 3.0, 1e-9);
  expect_certificate(lp, s);
}

TEST(SolveLp, DimensionMismatchThrows) {
  EXPECT_THROW(solve_lp(make_lp({1.0}, {{1.0, 2.0}}, {1.0})), InvalidInputError);
  EXPECT_THROW(solve_lp(make_lp({1.0}, {{1.0}}, {})), InvalidInputError);
  EXPECT_THROW(solve_lp(make_lp({NAN}, {{1.0}}, {1.0})), InvalidInputError);
}

TEST(SolveLp, MatchesVertexEnumerationOnRandomPrograms) {
  verify::Rng rng(2026);
  for (int trial = 0; trial < 300; ++trial) {
    const LinearProgram lp = verify::random_lp(rng, 4, 8);
    const LpSolution s = solve_lp(lp);
    const auto v = verify::vertex_enumeration(lp);
    if (!v.has_value()) {
      EXPECT_EQ(s.status, LpStatus::kInfeasible) << "trial " << trial;
      continue;
    }
    ASSERT_EQ(s.status, LpStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(s.objective, v->objective, 1e-7 * (1 + v->objective))
        << "trial " << trial;
    expect_certificate(lp, s);
  }
}

}  // namespace
}  // namespace cpac
