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

#include "cpac/mechanism.h"

#include <cmath>

#include <gtest/gtest.h>

#include "cpac/errors.h"
#include "cpac/exact_opt.h"
#include "cpac/game.h"
#include "cpac/planner.h"
#include "cpac/verify/random.h"
#include "test_util.h"

namespace cpac {
namespace {

using testing::data_path;
using testing::trivial_instance;

std::map<ContributionVector, std::vector<double>> block_table(
    const std::vector<double>& costs, double constant) {
  std::map<ContributionVector, std::vector<double>> t;
  for (std::int64_t a = 0; a < 3; ++a) {
    for (std::int64_t b = 0; b < 3; ++b) {
      const ContributionVector m{a + 2, b + 5};
      t[m] = {costs[0] * m[0] + constant, costs[1] * m[1] + constant};
    }
  }
  return t;
}

TEST(PwycPayment, ZeroContributionZeroConstant) {
  const std::vector<double> c{0.5, 0.7}, zero{0.0, 0.0};
  EXPECT_EQ(pwyc_payment(ContributionVector{0, 0}, c, zero), zero);
}

TEST(PwycPayment, Arithmetic) {
  const std::vector<double> c{0.01, 0.02}, zero{0.0, 0.0};
  const auto p = pwyc_payment(ContributionVector{3, 5}, c, zero);
  EXPECT_NEAR(p[0], 0.03, 1e-15);
  EXPECT_NEAR(p[1], 0.10, 1e-15);
}

TEST(PwycPayment, TruthfulUtilityIsOnePlusConstant) {
  const double eps = 0.1;
  const Instance inst = alice_bob_instance(eps, 0.1);
  const std::vector<double> constants{0.25, -0.5};
  const PaymentRule rule = PaymentRule::pwyc(constants);
  for (std::size_t i = 0; i < 2; ++i) {
    const AuditReport r = strategyproofness_audit(inst, 0.05, i, rule);
    EXPECT_NEAR(r.truthful_utility, 1.0 + constants[i], 1e-12);
    EXPECT_TRUE(r.strategyproof);
    EXPECT_LE(r.best_misreport_utility, 1.0 + constants[i] + 1e-9);
  }
}

TEST(VcgPayment, SingleAgentGetsPivot) {
  const std::vector<double> q{0.4};
  EXPECT_EQ(vcg_payment(trivial_instance(1), ContributionVector{3}, q),
            std::vector<double>{0.4});
}

TEST(VcgPayment, TwoAgentArithmetic) {
  const Instance inst(2, HypothesisClass::all_labelings(2),
                      {{{0.5, 0.5}, 1.0}, {{0.5, 0.5}, 1.0}}, 0.1, 0.1);
  EXPECT_EQ(vcg_payment(inst, ContributionVector{2, 3}),
            (std::vector<double>{-2.0, -1.0}));
}

TEST(VcgPayment, EqualsOthersUtilityAtOptimum) {
  const double eps = 0.1;
  const Instance inst = alice_bob_instance(eps, alice_bob_delta(eps));
  const ContributionVector opt = exact_min_cost(inst, Objective::kPac);
  const auto p = vcg_payment(inst, opt);
  for (std::size_t i = 0; i < 2; ++i) {
    double others = 0.0;
    for (std::size_t j = 0; j < 2; ++j) {
      if (j != i) others += utility(inst, opt, j);
    }
    EXPECT_NEAR(p[i], others, 1e-12);
  }
}

TEST(ClarkePivots, SingleAgentIsZero) {
  EXPECT_EQ(clarke_pivots(trivial_instance(1)), std::vector<double>{0.0});
}

TEST(ClarkePivots, AliceBobUsesSoloOptimumOfTheOther) {
  const double eps = 0.1;
  const Instance inst = alice_bob_instance(eps, alice_bob_delta(eps));
  const auto q = clarke_pivots(inst);
  for (std::size_t i = 0; i < 2; ++i) {
    const Instance other = inst.with_agents({inst.agent(1 - i)});
    const double solo = exact_min_cost_search(*make_oracle(other, Objective::kPac)).cost;
    EXPECT_NEAR(q[i], solo - 1.0, 1e-12);
  }
}

TEST(PaymentRule, TableOutsideDomainThrows) {
  const PaymentRule rule = PaymentRule::from_table(block_table({1.0, 1.0}, 0.0));
  const Instance inst(2, HypothesisClass::all_labelings(2),
                      {{{0.5, 0.5}, 1.0}, {{0.5, 0.5}, 1.0}}, 0.1, 0.1);
  EXPECT_THROW(rule.payments(inst, ContributionVector{0, 0}), InvalidInputError);
  EXPECT_EQ(rule.payments(inst, ContributionVector{2, 5}),
            (std::vector<double>{2.0, 5.0}));
}

// ---------------------------------------------------------------------------
// Audit

TEST(Audit, PwycIsStrategyproofOnRandomInstances) {
  verify::Rng rng(12);
  verify::RandomInstanceSpec spec;
  spec.max_domain = 4;
  spec.max_hypotheses = 5;
  for (int trial = 0; trial < 8; ++trial) {
    const Instance inst = verify::random_instance(rng, spec);
    const auto rule =
        PaymentRule::pwyc(std::vector<double>(inst.num_agents(), 0.0));
    for (std::size_t a = 0; a < inst.num_agents(); ++a) {
      EXPECT_TRUE(strategyproofness_audit(inst, 0.05, a, rule).strategyproof)
          << "trial " << trial << " agent " << a;
    }
  }
}

TEST(Audit, OverReimbursementIsCaught) {
  // Under-reporting the mass of the disagreement region makes the planner
  // ask for more samples, and the doubled refund turns each into profit.
  const Instance inst = testing::single_pair_instance(
      3, {1, 2}, {0.7, 0.1, 0.2}, 0.1, 0.05, 0.01);
  const auto rule = PaymentRule::pwyc({0.0}, 2.0);
  const AuditReport r = strategyproofness_audit(inst, 0.05, 0, rule);
  EXPECT_FALSE(r.strategyproof);
  ASSERT_TRUE(r.misreport_allocation.has_value());
  EXPECT_GT((*r.misreport_allocation)[0], r.truthful_allocation[0]);
  EXPECT_GT(r.best_misreport_utility, r.truthful_utility);
}

TEST(Audit, SingleAgentSingleHypothesisIsTrivial) {
  const auto rule = PaymentRule::pwyc({0.0}, 2.0);
  const AuditReport r = strategyproofness_audit(trivial_instance(1), 0.05, 0, rule);
  EXPECT_TRUE(r.strategyproof);
  EXPECT_EQ(r.truthful_allocation, ContributionVector{0});
}

TEST(Audit, ParallelMatchesSerial) {
  const Instance inst = alice_bob_instance(0.1, 0.1);
  const auto rule = PaymentRule::pwyc({0.0, 0.0}, 2.0);
  const AuditReport a = strategyproofness_audit(inst, 0.05, 1, rule, 1);
  const AuditReport b = strategyproofness_audit(inst, 0.05, 1, rule, 3);
  EXPECT_EQ(a.best_misreport_utility, b.best_misreport_utility);
  EXPECT_EQ(a.misreport, b.misreport);
}

TEST(Audit, RejectsBadArguments) {
  const Instance inst = alice_bob_instance(0.1, 0.1);
  const auto rule = PaymentRule::pwyc({0.0, 0.0});
  EXPECT_THROW(strategyproofness_audit(inst, 0.0, 0, rule), InvalidInputError);
  EXPECT_THROW(strategyproofness_audit(inst, 0.05, 2, rule), InvalidInputError);
}

// ---------------------------------------------------------------------------
// Uniqueness

TEST(Uniqueness, AcceptsShiftedPwycBlock) {
  const std::vector<double> costs{0.5, 1.5};
  const auto r =
      check_pwyc_uniqueness(PaymentRule::from_table(block_table(costs, 7.0)), costs);
  EXPECT_TRUE(r.unique);
  ASSERT_EQ(r.constants.size(), 2u);
  EXPECT_NEAR(r.constants[0], 7.0, 1e-12);
  EXPECT_NEAR(r.constants[1], 7.0, 1e-12);
}

TEST(Uniqueness, RejectsSinglePerturbation) {
  const std::vector<double> costs{0.5, 1.5};
  auto table = block_table(costs, 7.0);
  const ContributionVector target{3, 6};
  table[target][1] += 0.01;
  const auto r = check_pwyc_uniqueness(PaymentRule::from_table(table), costs);
  EXPECT_FALSE(r.unique);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->agent, 1u);
  EXPECT_TRUE(r.witness->m == target || r.witness->m_prime == target);
  EXPECT_GT(std::abs(r.witness->slack - r.witness->slack_prime), 1e-9);
}

TEST(Uniqueness, RejectsVcgStyleTable) {
  const std::vector<double> costs{1.0, 2.0};
  std::map<ContributionVector, std::vector<double>> table;
  for (std::int64_t a = 0; a < 3; ++a) {
    for (std::int64_t b = 0; b < 3; ++b) {
      const ContributionVector m{a, b};
      table[m] = {1.0 - costs[1] * b, 1.0 - costs[0] * a};
    }
  }
  EXPECT_FALSE(check_pwyc_uniqueness(PaymentRule::from_table(table), costs).unique);
}

TEST(Uniqueness, DisconnectedDomainIsRejected) {
  std::map<ContributionVector, std::vector<double>> table{
      {ContributionVector{0, 0}, {0.0, 0.0}},
      {ContributionVector{2, 0}, {2.0, 0.0}}};
  EXPECT_THROW(
      check_pwyc_uniqueness(PaymentRule::from_table(table), std::vector<double>{1, 1}),
      ValidationError);
}

TEST(Uniqueness, RandomTablesAndPerturbations) {
  verify::Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<double> costs{0.3, 1.7, 0.9};
    auto table = verify::random_pwyc_table(rng, costs, 3);
    EXPECT_TRUE(check_pwyc_uniqueness(PaymentRule::from_table(table), costs).unique);
    if (table.size() < 2) continue;
    table.begin()->second[2] -= 0.5;
    EXPECT_FALSE(
        check_pwyc_uniqueness(PaymentRule::from_table(table), costs).unique);
  }
}

TEST(PaymentTableFile, FixturesLoad) {
  const PaymentTable good = load_payment_table(data_path("pwyc_table.json"));
  EXPECT_TRUE(check_pwyc_uniqueness(good.rule, good.costs).unique);
  const PaymentTable bad = load_payment_table(data_path("perturbed_table.json"));
  EXPECT_FALSE(check_pwyc_uniqueness(bad.rule, bad.costs).unique);
}

TEST(PaymentTableFile, JsonRoundTrip) {
  PaymentTable t{{1.0, 2.0}, PaymentRule::from_table(block_table({1.0, 2.0}, 3.0))};
  const PaymentTable back = payment_table_from_json(payment_table_to_json(t));
  EXPECT_EQ(back.costs, t.costs);
  EXPECT_EQ(back.rule.table, t.rule.table);
}

TEST(PaymentTableFile, MalformedIsParseError) {
  EXPECT_THROW(payment_table_from_json(nlohmann::json::parse(R"({"costs":[1]})")),
               ParseError);
}

// ---------------------------------------------------------------------------
// Obliviousness witness

WitnessOptions arithmetic_only() {
  WitnessOptions o;
  o.exact = false;
  o.mc_trials = 0;
  return o;
}

TEST(Witness, ThresholdValue) {
  EXPECT_NEAR(witness_threshold(18), 2 * 18 * std::log2(18.0), 1e-12);
}

TEST(Witness, BoxChecksPassAtThreshold) {
  const auto m0 = static_cast<std::int64_t>(std::ceil(witness_threshold(18)));
  const ContributionVector m{m0, m0};
  const ContributionVector mp{m0 + 1, m0};
  const ObliviousnessWitness w =
      obliviousness_witness(m, mp, 18, 0.5, arithmetic_only());
  EXPECT_EQ(w.num_points, 17u);
  EXPECT_NEAR(w.alpha, std::log(36.0), 1e-15);
  EXPECT_TRUE(w.boxes_ok);
  EXPECT_TRUE(w.binding_ok);
  for (const auto* d : {&w.d1, &w.d2, &w.d1_prime, &w.d2_prime}) {
    double total = 0.0;
    for (double v : *d) total += v;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  // The perturbed distribution's second mass stays inside (0, 1/(2n)).
  EXPECT_GT(w.d1_prime[1], 0.0);
  EXPECT_LT(w.d1_prime[1], 1.0 / (2.0 * 17));
}

TEST(Witness, BindingMassesAreExactAtM) {
  const ContributionVector m{160, 200};
  const ObliviousnessWitness w =
      obliviousness_witness(m, ContributionVector{160, 199}, 18, 0.5,
                            arithmetic_only());
  for (std::size_t x = 0; x < 2; ++x) {
    EXPECT_NEAR(160 * w.d1[x] + 200 * w.d2[x], w.alpha,
                w.alpha / 160.0);
    EXPECT_NEAR(160 * w.d1[x] + 199 * w.d2_prime[x], w.alpha, 1e-12);
  }
}

TEST(Witness, FeasibleByExactOracleAndMonteCarlo) {
  WitnessOptions o;
  o.mc_trials = 2000;
  const ObliviousnessWitness w = obliviousness_witness(
      ContributionVector{151, 151}, ContributionVector{152, 151}, 18, 0.5, o);
  EXPECT_TRUE(w.feasibility_ok);
  ASSERT_EQ(w.feasibility.size(), 9u);
  for (const auto& f : w.feasibility) {
    ASSERT_TRUE(f.exact_feasible.has_value());
    EXPECT_TRUE(*f.exact_feasible) << f.profile << " " << f.vector_name;
    EXPECT_EQ(f.mc_feasible.has_value(), f.vector_name != "m'");
  }
}

TEST(Witness, PreconditionsAreEnforced) {
  const auto o = arithmetic_only();
  EXPECT_THROW(obliviousness_witness(ContributionVector{100, 151},
                                     ContributionVector{101, 151}, 18, 0.5, o),
               InvalidInputError);
  EXPECT_THROW(obliviousness_witness(ContributionVector{151, 151},
                                     ContributionVector{153, 151}, 18, 0.5, o),
               InvalidInputError);
  EXPECT_THROW(obliviousness_witness(ContributionVector{151, 151},
                                     ContributionVector{152, 151}, 10, 0.5, o),
               InvalidInputError);
  EXPECT_THROW(obliviousness_witness(ContributionVector{151, 151},
                                     ContributionVector{152, 151}, 18, 0.9, o),
               InvalidInputError);
}

}  // namespace
}  // namespace cpac
