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

#include <algorithm>
#include <cmath>

#include "cpac/errors.h"

namespace cpac {

std::string to_string(Objective objective) {
  return objective == Objective::kPac ? "pac" : "expected";
}

Objective objective_from_string(const std::string& name) {
  if (name == "pac") return Objective::kPac;
  if (name == "expected") return Objective::kExpected;
  throw InvalidInputError("unknown objective '" + name +
                          "', expected pac or expected");
}

double log_miss_coefficient(double mass) {
  return -std::log1p(-std::min(std::max(mass, 0.0), kMaxLogMass));
}

std::string pair_tag(std::size_t h1, std::size_t h2) {
  return std::to_string(h1) + "," + std::to_string(h2);
}

std::pair<std::size_t, std::size_t> parse_pair_tag(const std::string& tag) {
  const auto comma = tag.find(',');
  if (comma == std::string::npos) {
    throw InvalidInputError("malformed row tag '" + tag + "'");
  }
  return {std::stoul(tag.substr(0, comma)), std::stoul(tag.substr(comma + 1))};
}

namespace {

// Per-agent masses of DIS(h1, h2) for every unordered pair, in pair order.
struct PairMasses {
  std::size_t h1;
  std::size_t h2;
  std::vector<double> mass;
};

std::vector<PairMasses> all_pairs(const Instance& instance) {
  const HypothesisClass& hs = instance.hypotheses();
  std::vector<PairMasses> out;
  for (std::size_t a = 0; a < hs.size(); ++a) {
    for (std::size_t b = a + 1; b < hs.size(); ++b) {
      const PointSet dis = disagreement_region(hs[a], hs[b]);
      PairMasses p{a, b, {}};
      p.mass.reserve(instance.num_agents());
      for (const AgentSpec& agent : instance.agents()) {
        p.mass.push_back(region_mass(agent.distribution, dis));
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<double> coefficients(const std::vector<double>& mass) {
  std::vector<double> row;
  row.reserve(mass.size());
  for (double beta : mass) row.push_back(log_miss_coefficient(beta));
  return row;
}

PlanResult plan(const Instance& instance, const LinearProgram& lp) {
  PlanResult out;
  out.rows = lp.num_rows();
  out.lp = solve_lp(lp);
  if (out.lp.status != LpStatus::kOptimal) {
    // Every row has a positive coefficient for some agent, so this signals a
    // solver defect rather than a property of the instance.
    throw SolverError("planner LP reported " + to_string(out.lp.status));
  }
  out.m = round_up(out.lp.x);
  out.lp_cost = out.lp.objective;
  out.rounded_cost = out.m.cost(instance.costs());
  return out;
}

}  // namespace

LinearProgram build_pac_lp(const Instance& instance) {
  LinearProgram lp;
  lp.costs = instance.costs();
  const double rhs = std::log(static_cast<double>(instance.num_hypotheses()) /
                              instance.delta());
  for (const PairMasses& p : all_pairs(instance)) {
    const bool bad = std::any_of(p.mass.begin(), p.mass.end(), [&](double b) {
      return exceeds_threshold(b, instance.epsilon());
    });
    if (!bad) continue;
    lp.constraint_matrix.push_back(coefficients(p.mass));
    lp.rhs.push_back(rhs);
    lp.row_tags.push_back(pair_tag(p.h1, p.h2));
  }
  return lp;
}

LinearProgram build_expected_lp(const Instance& instance) {
  LinearProgram lp;
  lp.costs = instance.costs();
  const double h = static_cast<double>(instance.num_hypotheses());
  const double eps = instance.epsilon();
  for (const PairMasses& p : all_pairs(instance)) {
    const double top = *std::max_element(p.mass.begin(), p.mass.end());
    if (!exceeds_threshold(top, eps / 2.0)) continue;
    // a = smallest mass among agents above eps / 2.
    double a = top;
    for (double v : p.mass) {
      if (exceeds_threshold(v, eps / 2.0)) a = std::min(a, v);
    }
    lp.constraint_matrix.push_back(coefficients(p.mass));
    lp.rhs.push_back(std::log(2.0 * h * a / eps));
    lp.row_tags.push_back(pair_tag(p.h1, p.h2));
  }
  return lp;
}

ContributionVector round_up(const std::vector<double>& x) {
  std::vector<std::int64_t> counts;
  counts.reserve(x.size());
  for (double v : x) {
    counts.push_back(
        std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil(v - 1e-9))));
  }
  return ContributionVector(std::move(counts));
}

PlanResult plan_pac(const Instance& instance) {
  return plan(instance, build_pac_lp(instance));
}

PlanResult plan_expected(const Instance& instance) {
  return plan(instance, build_expected_lp(instance));
}

ContributionVector solve_pac_allocation(const Instance& instance) {
  return plan_pac(instance).m;
}

ContributionVector solve_expected_allocation(const Instance& instance) {
  return plan_expected(instance).m;
}

HypothesisClass gamma_cover(const HypothesisClass& hypotheses,
                            const std::vector<AgentSpec>& agents,
                            double gamma) {
  if (!(gamma > 0.0)) throw InvalidInputError("gamma must be positive");
  if (agents.empty()) throw InvalidInputError("gamma_cover needs an agent");
  const std::size_t k = agents.size();
  std::vector<double> mixture(hypotheses.domain_size(), 0.0);
  for (const AgentSpec& agent : agents) {
    if (agent.distribution.size() != mixture.size()) {
      throw InvalidInputError("agent distribution length mismatch");
    }
    for (std::size_t x = 0; x < mixture.size(); ++x) {
      mixture[x] += agent.distribution[x] / static_cast<double>(k);
    }
  }
  const double radius = gamma / static_cast<double>(k);
  std::vector<Hypothesis> members;
  for (const Hypothesis& h : hypotheses) {
    const bool covered =
        std::any_of(members.begin(), members.end(), [&](const Hypothesis& c) {
          return region_mass(mixture, disagreement_region(h, c)) <=
                 radius + kMassTolerance;
        });
    if (!covered) members.push_back(h);
  }
  return HypothesisClass(std::move(members));
}

PipelineResult infinite_class_pipeline(const Instance& instance,
                                       const PipelineParams& params) {
  PipelineResult out{.m = {}, .base = {}, .cover = instance.hypotheses()};
  const double h = static_cast<double>(instance.num_hypotheses());
  const double eps = instance.epsilon();
  const double delta = instance.delta();
  const double k = static_cast<double>(instance.num_agents());

  out.scale_d = params.scale_d.value_or(std::max(1.0, std::ceil(std::log2(h))));
  if (!(out.scale_d > 0.0)) throw InvalidInputError("scale_d must be positive");

  const auto costs = instance.costs();
  const double c_min = *std::min_element(costs.begin(), costs.end());
  const double c_max = *std::max_element(costs.begin(), costs.end());
  out.gamma = params.gamma.value_or(
      c_min * eps * delta /
      (c_max * k * (out.scale_d + std::log(1.0 / delta))));
  if (!(out.gamma > 0.0)) throw InvalidInputError("gamma must be positive");

  out.cover = gamma_cover(instance.hypotheses(), instance.agents(), out.gamma);
  const double cover_size = static_cast<double>(out.cover.size());

  out.delta_double_prime =
      params.delta_double_prime.value_or(delta / (4.0 * cover_size));
  out.delta_prime = params.delta_prime.value_or(
      delta / (8.0 * (out.scale_d + std::log(2.0 * cover_size / delta))));
  if (!(out.delta_prime > 0.0 && out.delta_prime < 1.0)) {
    throw InvalidInputError("delta_prime must lie in (0, 1)");
  }
  if (!(out.delta_double_prime > 0.0 && out.delta_double_prime <= 1.0)) {
    throw InvalidInputError("delta_double_prime must lie in (0, 1]");
  }

  const Instance reduced =
      instance.with_hypotheses(out.cover).with_delta(out.delta_prime);
  out.base = solve_pac_allocation(reduced);
  out.multiplier = static_cast<std::int64_t>(std::ceil(
      out.scale_d + std::log(1.0 / out.delta_double_prime) - 1e-12));
  out.multiplier = std::max<std::int64_t>(1, out.multiplier);
  std::vector<std::int64_t> scaled = out.base.counts();
  for (auto& v : scaled) v *= out.multiplier;
  out.m = ContributionVector(std::move(scaled));
  return out;
}

}  // namespace cpac
