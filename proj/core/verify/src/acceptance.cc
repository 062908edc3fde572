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

#include "cpac/verify/acceptance.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>

#include "cpac/errors.h"
#include "cpac/exact_opt.h"
#include "cpac/feasibility.h"
#include "cpac/game.h"
#include "cpac/mechanism.h"
#include "cpac/planner.h"
#include "cpac/reduction.h"
#include "cpac/verify/oracles.h"
#include "cpac/verify/random.h"

namespace cpac::verify {

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Rng criterion_rng(const AcceptanceOptions& options, int id) {
  return Rng(trial_seed(options.seed, static_cast<std::uint64_t>(id)));
}

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

OracleOptions wide_oracle(std::size_t num_hypotheses) {
  OracleOptions o = OracleOptions::from_env();
  o.max_bad_set = std::max(o.max_bad_set, num_hypotheses);
  return o;
}

// 1. LP cost over exact optimum stays within the union-bound factor.
Outcome approximation_bound(const AcceptanceOptions& options) {
  Rng rng = criterion_rng(options, 1);
  RandomInstanceSpec spec;  // k <= 3, H <= 8, domain <= 8, delta 0.1
  const std::size_t count = options.quick ? 20 : 100;
  double worst = 0.0;
  std::size_t violations = 0, infeasible = 0;
  for (std::size_t t = 0; t < count; ++t) {
    const Instance inst = random_instance(rng, spec);
    const double bound =
        (std::log(1.0 / inst.delta()) +
         std::log(static_cast<double>(inst.num_hypotheses()))) /
        std::log(1.0 / inst.delta());
    const PlanResult plan = plan_pac(inst);
    const auto oracle = make_oracle(inst, Objective::kPac);
    const double opt = exact_min_cost_search(*oracle).cost;
    double ratio = 1.0;
    if (opt > 0.0) {
      ratio = plan.lp_cost / opt;
    } else if (plan.lp_cost > 1e-9) {
      ratio = INFINITY;
    }
    worst = std::max(worst, ratio / bound);
    if (ratio > bound + 1e-9) ++violations;
    if (!oracle->feasible(plan.m)) ++infeasible;
  }
  return {violations == 0 && infeasible == 0,
          std::to_string(count) + " instances, max ratio/bound " + fmt(worst) +
              ", bound violations " + std::to_string(violations) +
              ", infeasible roundings " + std::to_string(infeasible)};
}

// 2. The three-agent cyclic instance has no pure equilibrium.
Outcome nonexistence(const AcceptanceOptions& options) {
  GameOptions game_options = GameOptions::from_env();
  game_options.jobs = options.jobs;
  const ContributionGame game(nonexistence_instance(), game_options);
  const GameOutcome out = game.enumerate_pure_ne();
  std::string box;
  for (const auto v : game.strategy_box()) {
    box += (box.empty() ? "" : ",") + std::to_string(v);
  }
  return {out.pure_ne.empty(), "box [0.." + box + "], pure NE found " +
                                   std::to_string(out.pure_ne.size())};
}

// 3. Alice/Bob: (1,1) is an equilibrium and optimal; free riding is costly.
Outcome alice_bob(const AcceptanceOptions& options) {
  const double eps = 0.1;
  const Instance inst = alice_bob_instance(eps, alice_bob_delta(eps));
  GameOptions game_options = GameOptions::from_env();
  game_options.jobs = options.jobs;
  const ContributionGame game(inst, game_options);
  const ContributionVector both({1, 1});
  const bool both_ne = game.is_pure_ne(both);
  const auto oracle = make_oracle(inst, Objective::kPac);
  const ExactResult opt = exact_min_cost_search(*oracle);
  const bool both_opt = opt.m == both;
  const GameOutcome ne = game.enumerate_pure_ne();
  std::size_t free_riding = 0;
  double worst_ratio = INFINITY;
  std::string shown;
  for (const ContributionVector& m : ne.pure_ne) {
    if (m[0] != 0 && m[1] != 0) continue;
    ++free_riding;
    const double ratio = m.cost(inst.costs()) / opt.cost;
    if (ratio < worst_ratio) {
      worst_ratio = ratio;
      shown = m.to_string();
    }
  }
  const bool costly = free_riding > 0 && worst_ratio >= 5.0 - 1e-12;
  std::string detail = std::string("(1,1) NE ") + (both_ne ? "yes" : "no") +
                       ", optimum " + opt.m.to_string() + " cost " +
                       fmt(opt.cost) + ", free-riding NE " +
                       std::to_string(free_riding);
  if (free_riding > 0) {
    detail += ", cheapest " + shown + " at " + fmt(worst_ratio) + "x optimum";
  }
  detail += " (need >= 5x)";
  return {both_ne && both_opt && costly, detail};
}

// 4. Price of stability on the hard instance tracks the log ratio.
Outcome pos_growth(const AcceptanceOptions& options) {
  const double delta = 0.5;
  const double epsilons[] = {0.05, 0.02};
  double pos[2] = {0.0, 0.0};
  bool within = true;
  std::string detail;
  for (int j = 0; j < 2; ++j) {
    const Instance inst = pos_instance(epsilons[j], delta);
    GameOptions game_options = GameOptions::from_env();
    game_options.oracle = wide_oracle(inst.num_hypotheses());
    game_options.jobs = options.jobs;
    const ContributionGame game(inst, game_options);
    const GameOutcome out = game.price_of_stability();
    if (!out.pos.has_value()) {
      return {false, "no pure NE at eps " + fmt(epsilons[j])};
    }
    pos[j] = *out.pos;
    const double target = (std::log(1.0 / epsilons[j]) + std::log(1.0 / delta)) /
                          std::log(1.0 / delta);
    const double rel = std::abs(pos[j] - target) / target;
    within = within && rel <= 0.25;
    detail += (detail.empty() ? "" : "; ") + std::string("eps ") +
              fmt(epsilons[j]) + ": PoS " + fmt(pos[j]) + " (NE " +
              out.best_ne->to_string() + ", OPT " + out.optimum->to_string() +
              ") vs " + fmt(target) + ", rel err " + fmt(rel);
  }
  const bool grows = pos[1] > pos[0];
  detail += std::string("; increasing ") + (grows ? "yes" : "no");
  return {within && grows, detail};
}

// 5. Inclusion-exclusion against exhaustive enumeration and Monte Carlo.
Outcome oracle_cross_validation(const AcceptanceOptions& options) {
  Rng rng = criterion_rng(options, 5);
  RandomInstanceSpec spec;
  spec.max_domain = 4;
  spec.max_hypotheses = 5;
  spec.epsilons = {0.1, 0.2, 0.3};
  const std::size_t count = options.quick ? 50 : 300;
  std::size_t compared = 0;
  double max_diff = 0.0;
  auto compare = [&](const Instance& inst, const ContributionVector& m) {
    const PacOracle oracle(inst);
    for (std::size_t t = 0; t < inst.num_hypotheses(); ++t) {
      for (std::size_t a = 0; a < inst.num_agents(); ++a) {
        const double ie = oracle.failure(m, t, a).value;
        const double brute = enumerate_pac_failure(inst, m, t, a);
        max_diff = std::max(max_diff, std::abs(ie - brute));
        ++compared;
      }
    }
  };
  compare(nonexistence_instance(), ContributionVector({1, 1, 0}));
  for (std::size_t t = 0; t < count; ++t) {
    const Instance inst = random_instance(rng, spec);
    compare(inst, random_contribution(rng, inst.num_agents(), 5));
  }
  const bool exact_ok = max_diff <= 1e-12;

  const std::size_t checks = 100;
  const std::size_t trials = options.quick ? 10000 : 100000;
  std::size_t agree = 0;
  double worst_z = 0.0;
  for (std::size_t c = 0; c < checks; ++c) {
    const Instance inst = random_instance(rng, spec);
    const auto m = random_contribution(rng, inst.num_agents(), 8);
    const std::size_t target = pick(rng, 0, inst.num_hypotheses() - 1);
    const std::size_t agent = pick(rng, 0, inst.num_agents() - 1);
    const double p = PacOracle(inst).failure(m, target, agent).value;
    const MonteCarloEstimate est = monte_carlo_pac_failure(
        inst, m, target, agent, trials, trial_seed(options.seed, 1000 + c));
    const double se = std::sqrt(std::max(0.0, p * (1.0 - p)) /
                                static_cast<double>(trials));
    const double diff = std::abs(est.estimate - p);
    if (se == 0.0) {
      if (diff <= 1e-12) ++agree;
    } else {
      worst_z = std::max(worst_z, diff / se);
      if (diff <= 4.0 * se) ++agree;
    }
  }
  const bool mc_ok = agree >= 99;
  return {exact_ok && mc_ok,
          std::to_string(compared) + " exact comparisons, max |diff| " +
              fmt(max_diff) + "; Monte Carlo " + std::to_string(agree) + "/" +
              std::to_string(checks) + " within 4 SE at " +
              std::to_string(trials) + " trials, max z " + fmt(worst_z)};
}

// 6. More samples never raise a failure probability.
Outcome monotonicity(const AcceptanceOptions& options) {
  Rng rng = criterion_rng(options, 6);
  RandomInstanceSpec spec;
  spec.max_domain = 6;
  spec.max_hypotheses = 6;
  const std::size_t count = options.quick ? 100 : 500;
  std::size_t violations = 0, lost = 0;
  double worst = -INFINITY;
  for (std::size_t t = 0; t < count; ++t) {
    const Instance inst = random_instance(rng, spec);
    const std::size_t k = inst.num_agents();
    const auto m = random_contribution(rng, k, 30);
    auto inc = random_contribution(rng, k, 10);
    if (inc.total() == 0) inc = inc.with(pick(rng, 0, k - 1), 1);
    std::vector<std::int64_t> sum(k);
    for (std::size_t i = 0; i < k; ++i) sum[i] = m[i] + inc[i];
    const ContributionVector bigger(std::move(sum));
    const PacOracle oracle(inst);
    for (std::size_t h = 0; h < inst.num_hypotheses(); ++h) {
      for (std::size_t a = 0; a < k; ++a) {
        const double before = oracle.failure(m, h, a).value;
        const double after = oracle.failure(bigger, h, a).value;
        worst = std::max(worst, after - before);
        if (after > before + 1e-12) ++violations;
      }
    }
    if (oracle.feasible(m) && !oracle.feasible(bigger)) ++lost;
  }
  return {violations == 0 && lost == 0,
          std::to_string(count) + " triples, max increase " + fmt(worst) +
              ", violations " + std::to_string(violations) +
              ", feasibility lost " + std::to_string(lost)};
}

// 7. PWYC survives the misreport grid; double reimbursement does not.
Outcome pwyc_strategyproof(const AcceptanceOptions& options) {
  Rng rng = criterion_rng(options, 7);
  RandomInstanceSpec spec;
  spec.max_domain = 4;
  spec.max_hypotheses = 6;
  const std::size_t count = options.quick ? 5 : 20;
  const double grid = 0.05;
  std::size_t profitable = 0, flagged = 0, audits = 0, misreports = 0;
  for (std::size_t t = 0; t < count; ++t) {
    const Instance inst = random_instance(rng, spec);
    const std::size_t k = inst.num_agents();
    const auto pwyc = PaymentRule::pwyc(std::vector<double>(k, 0.0));
    const auto doubled = PaymentRule::pwyc(std::vector<double>(k, 0.0), 2.0);
    bool broken = false;
    for (std::size_t a = 0; a < k; ++a) {
      const AuditReport r =
          strategyproofness_audit(inst, grid, a, pwyc, options.jobs);
      ++audits;
      misreports += r.misreports_checked;
      if (!r.strategyproof) ++profitable;
      if (!broken) {
        broken = !strategyproofness_audit(inst, grid, a, doubled, options.jobs)
                      .strategyproof;
      }
    }
    if (broken) ++flagged;
  }
  return {profitable == 0 && flagged >= 1,
          std::to_string(count) + " instances, " + std::to_string(audits) +
              " audits, " + std::to_string(misreports) +
              " misreports; profitable under PWYC " +
              std::to_string(profitable) + "; doubled reimbursement flagged on " +
              std::to_string(flagged)};
}

// 8. Uniqueness checker: accepts PWYC tables, rejects perturbed ones.
Outcome uniqueness(const AcceptanceOptions& options) {
  Rng rng = criterion_rng(options, 8);
  const std::size_t count = 100;
  std::size_t accepted = 0, rejected = 0, bad_witness = 0;
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t k = pick(rng, 2, 3);
    std::vector<double> costs(k);
    for (double& c : costs) {
      c = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
    }
    auto table = random_pwyc_table(rng, costs, 4);
    while (table.size() < 2) table = random_pwyc_table(rng, costs, 4);
    if (check_pwyc_uniqueness(PaymentRule::from_table(table), costs).unique) {
      ++accepted;
    }

    auto it = table.begin();
    std::advance(it, pick(rng, 0, table.size() - 1));
    const ContributionVector target = it->first;
    const std::size_t agent = pick(rng, 0, k - 1);
    const double size = std::uniform_real_distribution<double>(1e-6, 1.0)(rng);
    it->second[agent] += std::bernoulli_distribution(0.5)(rng) ? size : -size;
    const UniquenessReport report =
        check_pwyc_uniqueness(PaymentRule::from_table(table), costs);
    if (report.unique || !report.witness.has_value()) continue;
    ++rejected;
    const UniquenessEdge& e = *report.witness;
    const auto a = table.find(e.m);
    const auto b = table.find(e.m_prime);
    bool ok = a != table.end() && b != table.end() && e.agent == agent &&
              (e.m == target || e.m_prime == target);
    if (ok) {
      std::int64_t l1 = 0;
      for (std::size_t i = 0; i < k; ++i) l1 += std::abs(e.m[i] - e.m_prime[i]);
      const double s = a->second[e.agent] -
                       costs[e.agent] * static_cast<double>(e.m[e.agent]);
      const double sp = b->second[e.agent] -
                        costs[e.agent] * static_cast<double>(e.m_prime[e.agent]);
      ok = l1 == 1 && std::abs(s - sp) > 1e-9 &&
           std::abs(s - e.slack) <= 1e-9 && std::abs(sp - e.slack_prime) <= 1e-9;
    }
    if (!ok) ++bad_witness;
  }
  return {accepted == count && rejected == count && bad_witness == 0,
          "accepted " + std::to_string(accepted) + "/" + std::to_string(count) +
              " PWYC tables, rejected " + std::to_string(rejected) + "/" +
              std::to_string(count) + " perturbations, invalid witnesses " +
              std::to_string(bad_witness)};
}

// 9. The reduction preserves the set-cover optimum.
Outcome reduction_fidelity(const AcceptanceOptions& options) {
  Rng rng = criterion_rng(options, 9);
  const std::size_t count = 20;
  std::size_t equal = 0;
  std::string mismatch;
  for (std::size_t t = 0; t < count; ++t) {
    const SetCoverInstance sc = random_set_cover(rng, 8, 6);
    const std::size_t cover = brute_force_set_cover(sc);
    const std::size_t samples = min_eliminating_sample_count(set_cover_to_pac(sc));
    if (cover == samples) {
      ++equal;
    } else if (mismatch.empty()) {
      mismatch = ", first mismatch " + std::to_string(samples) + " vs " +
                 std::to_string(cover);
    }
  }
  return {equal == count, std::to_string(equal) + "/" + std::to_string(count) +
                              " instances equal" + mismatch};
}

// 10. Expected-objective relaxation is sound and nearly tight.
Outcome expected_soundness(const AcceptanceOptions& options) {
  Rng rng = criterion_rng(options, 10);
  RandomInstanceSpec spec;
  spec.max_agents = 2;
  spec.max_hypotheses = 5;
  spec.max_domain = 4;
  spec.epsilons = {0.2, 0.3};
  const std::size_t count = options.quick ? 5 : 20;
  std::size_t infeasible = 0, row_violations = 0, rows = 0;
  double worst_slack = INFINITY;
  for (std::size_t t = 0; t < count; ++t) {
    const Instance inst = random_instance(rng, spec);
    const ContributionVector m = solve_expected_allocation(inst);
    if (!expected_feasible(inst, m)) ++infeasible;

    const Instance quarter = inst.with_epsilon(inst.epsilon() / 4.0);
    const auto oracle = make_oracle(quarter, Objective::kExpected);
    const ContributionVector opt = exact_min_cost_search(*oracle).m;
    const auto mult = static_cast<std::int64_t>(std::ceil(
        std::log(2.0 * static_cast<double>(inst.num_hypotheses())) - 1e-12));
    const LinearProgram lp = build_expected_lp(inst);
    for (std::size_t r = 0; r < lp.num_rows(); ++r) {
      double lhs = 0.0;
      for (std::size_t i = 0; i < lp.num_variables(); ++i) {
        lhs += lp.constraint_matrix[r][i] * static_cast<double>(mult * opt[i]);
      }
      ++rows;
      worst_slack = std::min(worst_slack, lhs - lp.rhs[r]);
      if (lhs < lp.rhs[r] - 1e-9) ++row_violations;
    }
  }
  return {infeasible == 0 && row_violations == 0,
          std::to_string(count) + " instances, infeasible roundings " +
              std::to_string(infeasible) + "; scaled optimum checked on " +
              std::to_string(rows) + " rows, violations " +
              std::to_string(row_violations) + ", min slack " +
              (rows == 0 ? std::string("n/a") : fmt(worst_slack))};
}

// 11. Local obliviousness witness at three (m, m') pairs.
Outcome witness(const AcceptanceOptions& options) {
  const std::size_t h = 18;
  const double delta = 0.5;
  const std::pair<ContributionVector, ContributionVector> pairs[] = {
      {ContributionVector({151, 151}), ContributionVector({152, 151})},
      {ContributionVector({160, 200}), ContributionVector({160, 199})},
      {ContributionVector({300, 180}), ContributionVector({299, 180})}};
  WitnessOptions wopt;
  wopt.mc_trials = options.quick ? 10000 : 100000;
  wopt.seed = options.seed;
  bool pass = true;
  std::string detail;
  for (const auto& [m, mp] : pairs) {
    const ObliviousnessWitness w = obliviousness_witness(m, mp, h, delta, wopt);
    bool mc_ok = true, exact_ok = true;
    double worst_mc = 0.0;
    for (const WitnessFeasibility& f : w.feasibility) {
      if (f.exact_feasible.has_value()) exact_ok = exact_ok && *f.exact_feasible;
      if (f.vector_name == "m'") continue;
      mc_ok = mc_ok && f.mc_feasible.value_or(false);
      worst_mc = std::max(worst_mc, f.mc_worst_estimate.value_or(INFINITY));
    }
    double worst_rel = 0.0;
    for (const BindingCheck& c : w.binding_checks) {
      worst_rel = std::max(worst_rel, c.relative_error);
    }
    pass = pass && w.boxes_ok && w.binding_ok && mc_ok;
    detail += (detail.empty() ? "" : "; ") + m.to_string() + "->" +
              mp.to_string() + ": boxes " + (w.boxes_ok ? "ok" : "FAIL") +
              ", binding " + (w.binding_ok ? "ok" : "FAIL") + " (max rel " +
              fmt(worst_rel) + "), MC " + (mc_ok ? "ok" : "FAIL") +
              " (max " + fmt(worst_mc) + "), exact " +
              (exact_ok ? "ok" : "FAIL");
  }
  return {pass, detail};
}

}  // namespace

std::string criterion_name(int id) {
  switch (id) {
    case 1: return "approximation-ratio-bound";
    case 2: return "no-pure-ne";
    case 3: return "alice-bob-equilibrium";
    case 4: return "price-of-stability-growth";
    case 5: return "oracle-cross-validation";
    case 6: return "monotonicity";
    case 7: return "pwyc-strategyproofness";
    case 8: return "pwyc-uniqueness-checker";
    case 9: return "set-cover-reduction";
    case 10: return "expected-objective-soundness";
    case 11: return "obliviousness-witness";
    default: return "unknown";
  }
}

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  CriterionResult result;
  result.id = id;
  result.name = criterion_name(id);
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome out;
    switch (id) {
      case 1: out = approximation_bound(options); break;
      case 2: out = nonexistence(options); break;
      case 3: out = alice_bob(options); break;
      case 4: out = pos_growth(options); break;
      case 5: out = oracle_cross_validation(options); break;
      case 6: out = monotonicity(options); break;
      case 7: out = pwyc_strategyproof(options); break;
      case 8: out = uniqueness(options); break;
      case 9: out = reduction_fidelity(options); break;
      case 10: out = expected_soundness(options); break;
      case 11: out = witness(options); break;
      default:
        out = {false, "no such criterion"};
    }
    result.pass = out.pass;
    result.detail = std::move(out.detail);
  } catch (const std::exception& e) {
    result.pass = false;
    result.detail = std::string("error: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return result;
}

std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options,
    const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> results;
  for (int id = 1; id <= kNumCriteria; ++id) {
    results.push_back(run_criterion(id, options));
    if (on_result) on_result(results.back());
  }
  return results;
}

std::string format_result(const CriterionResult& result) {
  char secs[32];
  std::snprintf(secs, sizeof(secs), "%.1fs", result.seconds);
  std::ostringstream out;
  out << (result.pass ? "PASS" : "FAIL") << "  " << result.id << "  "
      << result.name << "  (" << secs << ")  " << result.detail;
  return out.str();
}

}  // namespace cpac::verify
