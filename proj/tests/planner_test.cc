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

#include "cpac/planner.h"

#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "cpac/errors.h"
#include "cpac/exact_opt.h"
#include "cpac/feasibility.h"
#include "cpac/game.h"
#include "cpac/verify/random.h"
#include "test_util.h"

namespace cpac {
namespace {

using testing::single_pair_instance;
using testing::trivial_instance;

std::map<std::string, std::size_t> rows_by_tag(const LinearProgram& lp) {
  std::map<std::string, std::size_t> out;
  for (std::size_t r = 0; r < lp.num_rows(); ++r) out[lp.row_tags[r]] = r;
  return out;
}

TEST(PairTag, RoundTrip) {
  EXPECT_EQ(pair_tag(3, 11), "3,11");
  EXPECT_EQ(parse_pair_tag("3,11"), (std::pair<std::size_t, std::size_t>{3, 11}));
  EXPECT_THROW(parse_pair_tag("3;11"), InvalidInputError);
}

TEST(Objective, Names) {
  EXPECT_EQ(objective_from_string("pac"), Objective::kPac);
  EXPECT_EQ(objective_from_string("expected"), Objective::kExpected);
  EXPECT_EQ(to_string(Objective::kExpected), "expected");
  EXPECT_THROW(objective_from_string("other"), InvalidInputError);
}

TEST(RoundUp, ToleratesSolverNoise) {
  EXPECT_EQ(round_up({2.0000000001, 2.1, 0.0}), (ContributionVector{2, 3, 0}));
}

TEST(BuildPacLp, SingleHypothesisHasNoRows) {
  const Instance inst = trivial_instance(2);
  EXPECT_EQ(build_pac_lp(inst).num_rows(), 0u);
  EXPECT_EQ(solve_pac_allocation(inst), ContributionVector::zeros(2));
}

TEST(BuildPacLp, PairAtEpsilonGetsNoRow) {
  // Masses 0.1 and 0.05 against epsilon 0.1: not strictly above.
  std::vector<AgentSpec> agents{{{0.1, 0.9}, 1.0}, {{0.05, 0.95}, 1.0}};
  const Instance inst(2, HypothesisClass({Hypothesis{0, 0}, Hypothesis{1, 0}}),
                      agents, 0.1, 0.1);
  EXPECT_EQ(build_pac_lp(inst).num_rows(), 0u);
}

TEST(BuildPacLp, AliceBobRowCoefficients) {
  const double eps = 0.1, delta = 0.2;
  const Instance inst = alice_bob_instance(eps, delta);
  const LinearProgram lp = build_pac_lp(inst);
  const auto rows = rows_by_tag(lp);
  // Labelings are ordered {00, 10, 01, 11}; 00 and 10 differ on x_A only.
  ASSERT_TRUE(rows.contains("0,1"));
  const auto& row = lp.constraint_matrix[rows.at("0,1")];
  EXPECT_NEAR(row[0], std::log(1.0 / (2 * eps)), 1e-12);
  EXPECT_NEAR(row[1], std::log(1.0 / (1 - 2 * eps)), 1e-12);
  EXPECT_NEAR(lp.rhs[rows.at("0,1")], std::log(4.0 / delta), 1e-12);
  EXPECT_EQ(lp.num_rows(), 6u);
}

TEST(SolvePacAllocation, SingleBadPairClosedForm) {
  const double beta = 0.3, delta = 0.05;
  const Instance inst =
      single_pair_instance(3, {1, 2}, {0.7, 0.1, 0.2}, 0.1, delta);
  const auto expected = static_cast<std::int64_t>(
      std::ceil(std::log(2.0 / delta) / std::log(1.0 / (1 - beta))));
  EXPECT_EQ(solve_pac_allocation(inst), ContributionVector{expected});
}

TEST(SolvePacAllocation, RandomInstancesAreFeasibleAndNearOptimal) {
  verify::Rng rng(101);
  verify::RandomInstanceSpec spec;
  for (int trial = 0; trial < 40; ++trial) {
    const Instance inst = verify::random_instance(rng, spec);
    const PlanResult plan = plan_pac(inst);
    const auto oracle = make_oracle(inst, Objective::kPac);
    EXPECT_TRUE(oracle->feasible(plan.m)) << "trial " << trial;
    const double opt = exact_min_cost_search(*oracle).cost;
    const double l = std::log(1.0 / inst.delta());
    const double factor =
        (l + std::log(static_cast<double>(inst.num_hypotheses()))) / l;
    double slack = 0.0;
    for (double c : inst.costs()) slack += c;
    EXPECT_LE(plan.rounded_cost, factor * opt + slack + 1e-9);
    EXPECT_LE(plan.lp_cost, plan.rounded_cost + 1e-9);
  }
}

TEST(BuildExpectedLp, SingleHypothesisHasNoRows) {
  EXPECT_EQ(build_expected_lp(trivial_instance(1)).num_rows(), 0u);
}

TEST(BuildExpectedLp, RhsUsesSmallestQualifyingMass) {
  const double eps = 0.5;
  std::vector<Hypothesis> hs{Hypothesis{0, 0, 0}, Hypothesis{1, 0, 0},
                             Hypothesis{0, 1, 0}, Hypothesis{0, 0, 1}};
  std::vector<AgentSpec> agents{{{0.6, 0.4, 0.0}, 1.0},
                                {{0.3, 0.2, 0.5}, 1.0}};
  const Instance inst(3, HypothesisClass(hs), agents, eps, 0.1);
  const LinearProgram lp = build_expected_lp(inst);
  const auto rows = rows_by_tag(lp);
  ASSERT_TRUE(rows.contains("0,1"));
  const std::size_t r = rows.at("0,1");
  // Both agents exceed eps/2 = 0.25 on {x0}; a = min(0.6, 0.3).
  EXPECT_NEAR(lp.rhs[r], std::log(2.0 * 4 * 0.3 / eps), 1e-12);
  EXPECT_NEAR(lp.constraint_matrix[r][0], log_miss_coefficient(0.6), 1e-15);
  EXPECT_NEAR(lp.constraint_matrix[r][1], log_miss_coefficient(0.3), 1e-15);
  // Pair (0, 2) qualifies through agent 0 alone (0.4 > 0.25).
  ASSERT_TRUE(rows.contains("0,2"));
  EXPECT_NEAR(lp.rhs[rows.at("0,2")], std::log(2.0 * 4 * 0.4 / eps), 1e-12);
}

TEST(SolveExpectedAllocation, RandomInstancesAreFeasible) {
  verify::Rng rng(202);
  verify::RandomInstanceSpec spec;
  spec.max_domain = 5;
  spec.max_hypotheses = 6;
  spec.epsilons = {0.1, 0.2, 0.3};
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = verify::random_instance(rng, spec);
    EXPECT_TRUE(expected_feasible(inst, solve_expected_allocation(inst)))
        << "trial " << trial;
  }
}

TEST(GammaCover, LargeRadiusKeepsOne) {
  const auto hc = HypothesisClass::all_labelings(3);
  const std::vector<AgentSpec> agents{{{0.2, 0.3, 0.5}, 1.0}};
  EXPECT_EQ(gamma_cover(hc, agents, 1.0).size(), 1u);
}

TEST(GammaCover, TinyRadiusKeepsAll) {
  const auto hc = HypothesisClass::all_labelings(3);
  const std::vector<AgentSpec> agents{{{0.2, 0.3, 0.5}, 1.0}};
  EXPECT_EQ(gamma_cover(hc, agents, 1e-9).size(), 8u);
}

TEST(GammaCover, UniformSingletons) {
  const std::size_t h = 6;
  std::vector<Hypothesis> hs;
  for (std::size_t x = 0; x < h; ++x) {
    std::vector<std::uint8_t> l(h, 0);
    l[x] = 1;
    hs.emplace_back(l);
  }
  const std::vector<AgentSpec> agents{{std::vector<double>(h, 1.0 / h), 1.0}};
  EXPECT_EQ(gamma_cover(HypothesisClass(hs), agents, 2.5 / h).size(), 1u);
  EXPECT_EQ(gamma_cover(HypothesisClass(hs), agents, 1.5 / h).size(), h);
}

TEST(GammaCover, EveryHypothesisIsCloseToTheCover) {
  verify::Rng rng(5);
  verify::RandomInstanceSpec spec;
  for (int trial = 0; trial < 30; ++trial) {
    const Instance inst = verify::random_instance(rng, spec);
    const double gamma = 0.3;
    const HypothesisClass cover =
        gamma_cover(inst.hypotheses(), inst.agents(), gamma);
    for (const Hypothesis& h : inst.hypotheses()) {
      bool close = false;
      for (const Hypothesis& c : cover) {
        bool all = true;
        for (const AgentSpec& a : inst.agents()) {
          all = all && disagreement_mass(a, h, c) <= gamma + 1e-12;
        }
        close = close || all;
      }
      EXPECT_TRUE(close);
    }
  }
}

TEST(Pipeline, DegenerateSettingsReduceToPlanner) {
  const Instance inst = nonexistence_instance();
  PipelineParams p;
  p.gamma = 1e-9;
  p.delta_prime = inst.delta();
  p.delta_double_prime = 1.0;
  p.scale_d = 1.0;
  const PipelineResult r = infinite_class_pipeline(inst, p);
  EXPECT_EQ(r.multiplier, 1);
  EXPECT_EQ(r.cover.size(), inst.num_hypotheses());
  EXPECT_EQ(r.m, solve_pac_allocation(inst));
}

TEST(Pipeline, ScaledOutputIsFeasible) {
  verify::Rng rng(8);
  verify::RandomInstanceSpec spec;
  spec.min_agents = spec.max_agents = 2;
  spec.min_hypotheses = spec.max_hypotheses = 8;
  spec.min_domain = spec.max_domain = 8;
  for (int trial = 0; trial < 5; ++trial) {
    const Instance inst = verify::random_instance(rng, spec);
    PipelineParams p;
    p.scale_d = 3.0;
    const PipelineResult r = infinite_class_pipeline(inst, p);
    EXPECT_TRUE(pac_feasible(inst, r.m)) << "trial " << trial;
    for (std::size_t i = 0; i < r.m.size(); ++i) {
      EXPECT_EQ(r.m[i], r.base[i] * r.multiplier);
    }
  }
}

TEST(Pipeline, RejectsBadParameters) {
  const Instance inst = nonexistence_instance();
  PipelineParams p;
  p.delta_prime = 1.5;
  EXPECT_THROW(infinite_class_pipeline(inst, p), InvalidInputError);
  p = {};
  p.gamma = -1.0;
  EXPECT_THROW(infinite_class_pipeline(inst, p), InvalidInputError);
}

}  // namespace
}  // namespace cpac
