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

#include "cpac/exact_opt.h"

#include <cmath>

#include <gtest/gtest.h>

#include "cpac/errors.h"
#include "cpac/game.h"
#include "cpac/verify/oracles.h"
#include "cpac/verify/random.h"
#include "test_util.h"

namespace cpac {
namespace {

using testing::single_pair_instance;
using testing::trivial_instance;

TEST(ExactMinCost, SingleHypothesisIsFree) {
  for (Objective o : {Objective::kPac, Objective::kExpected}) {
    const auto oracle = make_oracle(trivial_instance(3), o);
    const ExactResult r = exact_min_cost_search(*oracle);
    EXPECT_EQ(r.m, ContributionVector::zeros(3));
    EXPECT_EQ(r.cost, 0.0);
  }
}

TEST(ExactMinCost, SingleBadHypothesisClosedForm) {
  const double beta = 0.3, delta = 0.05;
  const Instance inst =
      single_pair_instance(3, {1, 2}, {0.7, 0.1, 0.2}, 0.1, delta);
  const auto expected = static_cast<std::int64_t>(
      std::ceil(std::log(delta) / std::log(1 - beta)));
  EXPECT_EQ(exact_min_cost(inst, Objective::kPac), ContributionVector{expected});
}

TEST(ExactMinCost, AliceBobOptimumIsOneEach) {
  const double eps = 0.1;
  const Instance inst = alice_bob_instance(eps, alice_bob_delta(eps));
  EXPECT_EQ(exact_min_cost(inst, Objective::kPac), (ContributionVector{1, 1}));
}

TEST(ExactMinCost, MatchesFullScan) {
  verify::Rng rng(77);
  verify::RandomInstanceSpec spec;
  spec.max_agents = 2;
  spec.max_domain = 4;
  spec.max_hypotheses = 5;
  spec.epsilons = {0.2, 0.3};
  spec.delta = 0.2;
  for (Objective o : {Objective::kPac, Objective::kExpected}) {
    for (int trial = 0; trial < 25; ++trial) {
      const Instance inst = verify::random_instance(rng, spec);
      const auto oracle = make_oracle(inst, o);
      const ExactResult r = exact_min_cost_search(*oracle);
      const auto scanned = verify::scan_min_cost(
          inst.num_agents(), r.cap, inst.costs(),
          [&](const ContributionVector& m) { return oracle->feasible(m); });
      ASSERT_TRUE(scanned.has_value());
      EXPECT_NEAR(r.cost, scanned->cost(inst.costs()), 1e-9)
          << to_string(o) << " trial " << trial;
      EXPECT_TRUE(oracle->feasible(r.m));
    }
  }
}

TEST(ExactMinCost, TooSmallCapIsInfeasible) {
  const Instance inst =
      single_pair_instance(3, {1, 2}, {0.7, 0.1, 0.2}, 0.1, 0.05);
  const auto oracle = make_oracle(inst, Objective::kPac);
  ExactOptions options;
  options.cap = 2;
  EXPECT_THROW(exact_min_cost_search(*oracle, options), InfeasibleError);
}

TEST(ExactMinCost, EvaluationBudgetIsCapacityError) {
  const Instance inst = nonexistence_instance();
  const auto oracle = make_oracle(inst, Objective::kPac);
  ExactOptions options;
  options.max_evaluations = 1;
  EXPECT_THROW(exact_min_cost_search(*oracle, options), CapacityError);
}

TEST(ApproximationRatio, SingleHypothesisConvention) {
  const RatioReport r = approximation_ratio(trivial_instance(2), Objective::kPac);
  EXPECT_EQ(r.ratio, 1.0);
  EXPECT_EQ(r.lp_ratio, 1.0);
}

TEST(ApproximationRatio, SingleConstraintClosedForm) {
  const double beta = 0.3, delta = 0.05;
  const Instance inst =
      single_pair_instance(3, {1, 2}, {0.7, 0.1, 0.2}, 0.1, delta);
  const double planner = std::ceil(std::log(2.0 / delta) / std::log(1 / (1 - beta)));
  const double optimum = std::ceil(std::log(1.0 / delta) / std::log(1 / (1 - beta)));
  const RatioReport r = approximation_ratio(inst, Objective::kPac);
  EXPECT_DOUBLE_EQ(r.ratio, planner / optimum);
  EXPECT_DOUBLE_EQ(r.planner_cost, planner);
  EXPECT_DOUBLE_EQ(r.optimal_cost, optimum);
}

}  // namespace
}  // namespace cpac
