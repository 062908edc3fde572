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

// Oracles deciding whether a contribution vector meets each agent's accuracy
// requirement.
//
// PAC requirement: for every target h* in the class, the probability that
// some hypothesis with disagreement mass above epsilon (under the agent's
// distribution) survives the pooled sample is at most delta. Survival means
// no sample lands in DIS(h*, h), so ERM with pessimistic tie-breaking may
// return it.
//
// Expected requirement: for every target, the expected error of the worst
// consistent hypothesis is at most epsilon.
//
// The exact oracles are compiled once per instance (PacOracle,
// ExpectedOracle) and then evaluated for many vectors; the free functions are
// one-shot conveniences.

#ifndef CPAC_FEASIBILITY_H_
#define CPAC_FEASIBILITY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cpac/instance.h"
#include "cpac/survival.h"

namespace cpac {

// Probabilities within this distance of delta (or expected errors within this
// distance of epsilon) count as meeting the requirement.
inline constexpr double kProbabilityTolerance = 1e-12;

struct OracleOptions {
  // Largest bad set handled exactly. Past it, callers get CapacityError.
  std::size_t max_bad_set = 20;
  // Guard on the number of live inclusion-exclusion terms.
  std::size_t max_terms = std::size_t{1} << 22;

  // Defaults, with max_bad_set overridden by ORACLE_CAP when set.
  static OracleOptions from_env();
};

struct FailureProbability {
  double value = 0.0;
  std::size_t target = 0;
  std::size_t agent = 0;
};

// Hypotheses h != target with D_agent(DIS(target, h)) > threshold, by index.
std::vector<std::size_t> bad_hypotheses(const Instance& instance,
                                        std::size_t target, std::size_t agent,
                                        double threshold);

// Common interface of the exact per-agent requirement checks.
class RequirementOracle {
 public:
  virtual ~RequirementOracle() = default;

  virtual const Instance& instance() const = 0;

  // Agent i's requirement, over every target.
  virtual bool agent_satisfied(const ContributionVector& m,
                               std::size_t agent) const = 0;

  bool feasible(const ContributionVector& m) const;

  // Smallest m_i meeting agent i's requirement when only agent i
  // contributes.
  virtual std::int64_t individual_sample_complexity(
      std::size_t agent) const = 0;
};

class PacOracle final : public RequirementOracle {
 public:
  explicit PacOracle(const Instance& instance,
                     OracleOptions options = OracleOptions::from_env());

  const Instance& instance() const override { return instance_; }

  FailureProbability failure(const ContributionVector& m, std::size_t target,
                             std::size_t agent) const;
  // Largest failure probability over targets.
  FailureProbability worst_failure(const ContributionVector& m,
                                   std::size_t agent) const;

  bool agent_satisfied(const ContributionVector& m,
                       std::size_t agent) const override;
  std::int64_t individual_sample_complexity(std::size_t agent) const override;

  // Upper end of the solo search range, ceil(ln(H/delta)/epsilon).
  std::int64_t solo_search_cap() const;

 private:
  const SurvivalExpansion& expansion(std::size_t target,
                                     std::size_t agent) const {
    return expansions_[target * instance_.num_agents() + agent];
  }

  Instance instance_;
  std::vector<SurvivalExpansion> expansions_;  // target-major
};

class ExpectedOracle final : public RequirementOracle {
 public:
  explicit ExpectedOracle(const Instance& instance,
                          OracleOptions options = OracleOptions::from_env());

  const Instance& instance() const override { return instance_; }

  double error(const ContributionVector& m, std::size_t target,
               std::size_t agent) const;
  double worst_error(const ContributionVector& m, std::size_t agent) const;

  bool agent_satisfied(const ContributionVector& m,
                       std::size_t agent) const override;
  std::int64_t individual_sample_complexity(std::size_t agent) const override;

 private:
  // E[err] = sum_j w_j * P(some of the j heaviest competitors survives),
  // w_j = a_(j) - a_(j+1).
  struct Layer {
    double weight = 0.0;
    SurvivalExpansion expansion;
  };

  Instance instance_;
  std::vector<std::vector<Layer>> layers_;  // target-major
};

// prod_i (1 - D_i(region))^{m_i}.
double survival_probability(const Instance& instance,
                            const ContributionVector& m,
                            std::span<const std::size_t> region);

FailureProbability pac_failure_probability(
    const Instance& instance, const ContributionVector& m, std::size_t target,
    std::size_t agent, const OracleOptions& options = OracleOptions::from_env());

bool pac_feasible(const Instance& instance, const ContributionVector& m,
                  const OracleOptions& options = OracleOptions::from_env());

double expected_erm_error(
    const Instance& instance, const ContributionVector& m, std::size_t target,
    std::size_t agent, const OracleOptions& options = OracleOptions::from_env());

bool expected_feasible(const Instance& instance, const ContributionVector& m,
                       const OracleOptions& options = OracleOptions::from_env());

std::int64_t individual_sample_complexity(
    const Instance& instance, std::size_t agent,
    const OracleOptions& options = OracleOptions::from_env());

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
};

// Draws full datasets and runs worst-case ERM. Trial t uses a generator
// seeded from (seed, t) only.
MonteCarloEstimate monte_carlo_pac_failure(const Instance& instance,
                                           const ContributionVector& m,
                                           std::size_t target,
                                           std::size_t agent,
                                           std::size_t trials,
                                           std::uint64_t seed);

// Same sampling, scored for every (target, agent) pair at once; entry
// target * k + agent.
std::vector<MonteCarloEstimate> monte_carlo_pac_failure_all(
    const Instance& instance, const ContributionVector& m, std::size_t trials,
    std::uint64_t seed);

// Seed for trial `trial` of a run seeded with `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

}  // namespace cpac

#endif  // CPAC_FEASIBILITY_H_
