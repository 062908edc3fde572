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

#include "cpac/feasibility.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <string>

#include "cpac/errors.h"

namespace cpac {

namespace {

std::vector<std::vector<double>> distributions_of(const Instance& instance) {
  std::vector<std::vector<double>> out;
  out.reserve(instance.num_agents());
  for (const AgentSpec& a : instance.agents()) out.push_back(a.distribution);
  return out;
}

void check_indices(const Instance& instance, std::size_t target,
                   std::size_t agent) {
  if (target >= instance.num_hypotheses()) {
    throw InvalidInputError("target index " + std::to_string(target) +
                            " out of range");
  }
  if (agent >= instance.num_agents()) {
    throw InvalidInputError("agent index " + std::to_string(agent) +
                            " out of range");
  }
}

std::string pair_label(std::size_t target, std::size_t agent) {
  return "target " + std::to_string(target) + ", agent " +
         std::to_string(agent);
}

// Smallest value in [lo, hi] where `ok` holds, given ok(hi) and monotone ok.
template <typename Pred>
std::int64_t lower_bound_true(std::int64_t lo, std::int64_t hi, Pred ok) {
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace

OracleOptions OracleOptions::from_env() {
  OracleOptions options;
  if (const char* cap = std::getenv("ORACLE_CAP"); cap != nullptr && *cap) {
    try {
      std::size_t used = 0;
      const unsigned long value = std::stoul(cap, &used);
      if (used != std::string(cap).size()) throw std::invalid_argument(cap);
      options.max_bad_set = value;
    } catch (const std::exception&) {
      throw InvalidInputError(std::string("ORACLE_CAP is not an integer: ") +
                              cap);
    }
  }
  return options;
}

std::vector<std::size_t> bad_hypotheses(const Instance& instance,
                                        std::size_t target, std::size_t agent,
                                        double threshold) {
  check_indices(instance, target, agent);
  const HypothesisClass& hs = instance.hypotheses();
  std::vector<std::size_t> out;
  for (std::size_t h = 0; h < hs.size(); ++h) {
    if (h == target) continue;
    const double mass =
        disagreement_mass(instance.agent(agent), hs[target], hs[h]);
    if (exceeds_threshold(mass, threshold)) out.push_back(h);
  }
  return out;
}

bool RequirementOracle::feasible(const ContributionVector& m) const {
  instance().check_contribution(m);
  for (std::size_t i = 0; i < instance().num_agents(); ++i) {
    if (!agent_satisfied(m, i)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// PacOracle

PacOracle::PacOracle(const Instance& instance, OracleOptions options)
    : instance_(instance) {
  const std::size_t k = instance_.num_agents();
  const std::size_t num_h = instance_.num_hypotheses();
  const HypothesisClass& hs = instance_.hypotheses();
  const auto distributions = distributions_of(instance_);
  expansions_.reserve(num_h * k);
  for (std::size_t t = 0; t < num_h; ++t) {
    for (std::size_t a = 0; a < k; ++a) {
      const auto bad = bad_hypotheses(instance_, t, a, instance_.epsilon());
      if (bad.size() > options.max_bad_set) {
        throw CapacityError("bad set of size " + std::to_string(bad.size()) +
                            " for " + pair_label(t, a) +
                            " exceeds the exact oracle cap of " +
                            std::to_string(options.max_bad_set) +
                            "; use the Monte Carlo estimator");
      }
      std::vector<PointSet> regions;
      regions.reserve(bad.size());
      for (std::size_t h : bad) {
        regions.push_back(disagreement_region(hs[t], hs[h]));
      }
      SurvivalExpansionBuilder builder(distributions, std::move(regions),
                                       options.max_terms);
      builder.add_all();
      expansions_.push_back(builder.snapshot());
    }
  }
}

FailureProbability PacOracle::failure(const ContributionVector& m,
                                      std::size_t target,
                                      std::size_t agent) const {
  instance_.check_contribution(m);
  check_indices(instance_, target, agent);
  const double all_hit = expansion(target, agent).probability_all_hit(m.counts());
  return {std::clamp(1.0 - all_hit, 0.0, 1.0), target, agent};
}

FailureProbability PacOracle::worst_failure(const ContributionVector& m,
                                            std::size_t agent) const {
  FailureProbability worst{0.0, 0, agent};
  for (std::size_t t = 0; t < instance_.num_hypotheses(); ++t) {
    const FailureProbability f = failure(m, t, agent);
    if (f.value > worst.value) worst = f;
  }
  return worst;
}

bool PacOracle::agent_satisfied(const ContributionVector& m,
                                std::size_t agent) const {
  for (std::size_t t = 0; t < instance_.num_hypotheses(); ++t) {
    if (failure(m, t, agent).value > instance_.delta() + kProbabilityTolerance) {
      return false;
    }
  }
  return true;
}

std::int64_t PacOracle::solo_search_cap() const {
  const double h = static_cast<double>(instance_.num_hypotheses());
  if (h <= 1.0) return 0;
  return static_cast<std::int64_t>(
      std::ceil(std::log(h / instance_.delta()) / instance_.epsilon()));
}

std::int64_t PacOracle::individual_sample_complexity(std::size_t agent) const {
  check_indices(instance_, 0, agent);
  const auto zero = ContributionVector::zeros(instance_.num_agents());
  auto ok = [&](std::int64_t v) {
    return agent_satisfied(zero.with(agent, v), agent);
  };
  const std::int64_t cap = solo_search_cap();
  if (!ok(cap)) {
    throw SolverError("agent " + std::to_string(agent) +
                      " is not satisfied by " + std::to_string(cap) +
                      " solo samples; the union bound guarantees it should be");
  }
  return lower_bound_true(0, cap, ok);
}

// ---------------------------------------------------------------------------
// ExpectedOracle

ExpectedOracle::ExpectedOracle(const Instance& instance, OracleOptions options)
    : instance_(instance) {
  const std::size_t k = instance_.num_agents();
  const std::size_t num_h = instance_.num_hypotheses();
  const HypothesisClass& hs = instance_.hypotheses();
  const auto distributions = distributions_of(instance_);
  layers_.reserve(num_h * k);
  for (std::size_t t = 0; t < num_h; ++t) {
    for (std::size_t a = 0; a < k; ++a) {
      auto competitors = bad_hypotheses(instance_, t, a, 0.0);
      if (competitors.size() > options.max_bad_set) {
        throw CapacityError(
            std::to_string(competitors.size()) + " competitors for " +
            pair_label(t, a) + " exceed the exact oracle cap of " +
            std::to_string(options.max_bad_set));
      }
      std::vector<double> mass(num_h, 0.0);
      for (std::size_t h : competitors) {
        mass[h] = disagreement_mass(instance_.agent(a), hs[t], hs[h]);
      }
      std::stable_sort(competitors.begin(), competitors.end(),
                       [&](std::size_t x, std::size_t y) {
                         return mass[x] > mass[y];
                       });
      std::vector<PointSet> regions;
      for (std::size_t h : competitors) {
        regions.push_back(disagreement_region(hs[t], hs[h]));
      }
      SurvivalExpansionBuilder builder(distributions, std::move(regions),
                                       options.max_terms);
      std::vector<Layer> layers;
      for (std::size_t j = 0; j < competitors.size(); ++j) {
        builder.add_next();
        const double next =
            j + 1 < competitors.size() ? mass[competitors[j + 1]] : 0.0;
        const double weight = mass[competitors[j]] - next;
        if (weight > 0.0) layers.push_back({weight, builder.snapshot()});
      }
      layers_.push_back(std::move(layers));
    }
  }
}

double ExpectedOracle::error(const ContributionVector& m, std::size_t target,
                             std::size_t agent) const {
  instance_.check_contribution(m);
  check_indices(instance_, target, agent);
  long double total = 0.0L;
  for (const Layer& layer :
       layers_[target * instance_.num_agents() + agent]) {
    const double some_survive =
        1.0 - layer.expansion.probability_all_hit(m.counts());
    total += static_cast<long double>(layer.weight) * std::max(0.0, some_survive);
  }
  return std::max(0.0, static_cast<double>(total));
}

double ExpectedOracle::worst_error(const ContributionVector& m,
                                   std::size_t agent) const {
  double worst = 0.0;
  for (std::size_t t = 0; t < instance_.num_hypotheses(); ++t) {
    worst = std::max(worst, error(m, t, agent));
  }
  return worst;
}

bool ExpectedOracle::agent_satisfied(const ContributionVector& m,
                                     std::size_t agent) const {
  for (std::size_t t = 0; t < instance_.num_hypotheses(); ++t) {
    if (error(m, t, agent) > instance_.epsilon() + kProbabilityTolerance) {
      return false;
    }
  }
  return true;
}

std::int64_t ExpectedOracle::individual_sample_complexity(
    std::size_t agent) const {
  check_indices(instance_, 0, agent);
  const auto zero = ContributionVector::zeros(instance_.num_agents());
  auto ok = [&](std::int64_t v) {
    return agent_satisfied(zero.with(agent, v), agent);
  };
  if (ok(0)) return 0;
  constexpr std::int64_t kLimit = std::int64_t{1} << 40;
  std::int64_t hi = 1;
  while (!ok(hi)) {
    if (hi >= kLimit) {
      throw SolverError("agent " + std::to_string(agent) +
                        " expected requirement not met below 2^40 samples");
    }
    hi *= 2;
  }
  return lower_bound_true(hi / 2 + 1, hi, ok);
}

// ---------------------------------------------------------------------------
// Free functions

double survival_probability(const Instance& instance,
                            const ContributionVector& m,
                            std::span<const std::size_t> region) {
  instance.check_contribution(m);
  for (std::size_t x : region) {
    if (x >= instance.domain().size) {
      throw InvalidInputError("region point " + std::to_string(x) +
                              " outside the domain");
    }
  }
  double out = 1.0;
  for (std::size_t i = 0; i < instance.num_agents(); ++i) {
    if (m[i] == 0) continue;
    const double mass = region_mass(instance.agent(i).distribution, region);
    out *= std::pow(1.0 - mass, static_cast<double>(m[i]));
  }
  return out;
}

FailureProbability pac_failure_probability(const Instance& instance,
                                           const ContributionVector& m,
                                           std::size_t target,
                                           std::size_t agent,
                                           const OracleOptions& options) {
  instance.check_contribution(m);
  check_indices(instance, target, agent);
  const auto bad = bad_hypotheses(instance, target, agent, instance.epsilon());
  if (bad.size() > options.max_bad_set) {
    throw CapacityError("bad set of size " + std::to_string(bad.size()) +
                        " for " + pair_label(target, agent) +
                        " exceeds the exact oracle cap of " +
                        std::to_string(options.max_bad_set) +
                        "; use the Monte Carlo estimator");
  }
  std::vector<PointSet> regions;
  for (std::size_t h : bad) {
    regions.push_back(disagreement_region(instance.hypotheses()[target],
                                          instance.hypotheses()[h]));
  }
  SurvivalExpansionBuilder builder(distributions_of(instance),
                                   std::move(regions), options.max_terms);
  builder.add_all();
  const double all_hit = builder.snapshot().probability_all_hit(m.counts());
  return {std::clamp(1.0 - all_hit, 0.0, 1.0), target, agent};
}

bool pac_feasible(const Instance& instance, const ContributionVector& m,
                  const OracleOptions& options) {
  return PacOracle(instance, options).feasible(m);
}

double expected_erm_error(const Instance& instance, const ContributionVector& m,
                          std::size_t target, std::size_t agent,
                          const OracleOptions& options) {
  return ExpectedOracle(instance, options).error(m, target, agent);
}

bool expected_feasible(const Instance& instance, const ContributionVector& m,
                       const OracleOptions& options) {
  return ExpectedOracle(instance, options).feasible(m);
}

std::int64_t individual_sample_complexity(const Instance& instance,
                                          std::size_t agent,
                                          const OracleOptions& options) {
  return PacOracle(instance, options).individual_sample_complexity(agent);
}

// ---------------------------------------------------------------------------
// Monte Carlo

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  // splitmix64 finalizer over a Weyl sequence keyed by the run seed.
  std::uint64_t z = seed + (trial + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

using Bits = std::vector<std::uint64_t>;

Bits to_bits(const PointSet& points, std::size_t words) {
  Bits out(words, 0);
  for (std::size_t x : points) out[x / 64] |= std::uint64_t{1} << (x % 64);
  return out;
}

bool intersects(const Bits& a, const Bits& b) {
  for (std::size_t w = 0; w < a.size(); ++w) {
    if (a[w] & b[w]) return true;
  }
  return false;
}

// Runs `trials` datasets and counts, for each listed target and every agent,
// the trials in which worst-case ERM has error above epsilon.
std::vector<std::size_t> count_failures(const Instance& instance,
                                        const ContributionVector& m,
                                        std::span<const std::size_t> targets,
                                        std::size_t trials,
                                        std::uint64_t seed) {
  instance.check_contribution(m);
  const std::size_t n = instance.domain().size;
  const std::size_t k = instance.num_agents();
  const std::size_t num_h = instance.num_hypotheses();
  const std::size_t words = (n + 63) / 64;
  const HypothesisClass& hs = instance.hypotheses();

  // Per listed target: region bitsets and per-agent masses of each h.
  std::vector<std::vector<Bits>> regions(targets.size());
  std::vector<std::vector<std::vector<double>>> masses(targets.size());
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    const std::size_t t = targets[ti];
    regions[ti].reserve(num_h);
    masses[ti].assign(num_h, std::vector<double>(k, 0.0));
    for (std::size_t h = 0; h < num_h; ++h) {
      const PointSet dis = disagreement_region(hs[t], hs[h]);
      regions[ti].push_back(to_bits(dis, words));
      for (std::size_t a = 0; a < k; ++a) {
        masses[ti][h][a] = region_mass(instance.agent(a).distribution, dis);
      }
    }
  }

  std::vector<std::discrete_distribution<std::size_t>> samplers;
  samplers.reserve(k);
  for (const AgentSpec& agent : instance.agents()) {
    samplers.emplace_back(agent.distribution.begin(),
                          agent.distribution.end());
  }

  std::vector<std::size_t> failures(targets.size() * k, 0);
  Bits seen(words, 0);
  std::vector<double> worst(k);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(trial_seed(seed, trial));
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::int64_t s = 0; s < m[i]; ++s) {
        const std::size_t x = samplers[i](rng);
        seen[x / 64] |= std::uint64_t{1} << (x % 64);
      }
    }
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
      std::fill(worst.begin(), worst.end(), 0.0);
      for (std::size_t h = 0; h < num_h; ++h) {
        if (intersects(regions[ti][h], seen)) continue;
        for (std::size_t a = 0; a < k; ++a) {
          worst[a] = std::max(worst[a], masses[ti][h][a]);
        }
      }
      for (std::size_t a = 0; a < k; ++a) {
        if (exceeds_threshold(worst[a], instance.epsilon())) {
          ++failures[ti * k + a];
        }
      }
    }
  }
  return failures;
}

MonteCarloEstimate make_estimate(std::size_t failures, std::size_t trials) {
  const double p = static_cast<double>(failures) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials)), trials};
}

}  // namespace

MonteCarloEstimate monte_carlo_pac_failure(const Instance& instance,
                                           const ContributionVector& m,
                                           std::size_t target,
                                           std::size_t agent,
                                           std::size_t trials,
                                           std::uint64_t seed) {
  check_indices(instance, target, agent);
  if (trials == 0) throw InvalidInputError("trials must be at least 1");
  const std::size_t targets[] = {target};
  const auto failures = count_failures(instance, m, targets, trials, seed);
  return make_estimate(failures[agent], trials);
}

std::vector<MonteCarloEstimate> monte_carlo_pac_failure_all(
    const Instance& instance, const ContributionVector& m, std::size_t trials,
    std::uint64_t seed) {
  if (trials == 0) throw InvalidInputError("trials must be at least 1");
  std::vector<std::size_t> targets(instance.num_hypotheses());
  std::iota(targets.begin(), targets.end(), 0);
  const auto failures = count_failures(instance, m, targets, trials, seed);
  std::vector<MonteCarloEstimate> out;
  out.reserve(failures.size());
  for (std::size_t f : failures) out.push_back(make_estimate(f, trials));
  return out;
}

}  // namespace cpac
