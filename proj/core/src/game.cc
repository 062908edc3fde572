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

#include "cpac/game.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <thread>
#include <utility>

#include "cpac/errors.h"
#include "cpac/exact_opt.h"

namespace cpac {

GameOptions GameOptions::from_env() {
  GameOptions options;
  if (const char* cap = std::getenv("ENUM_CAP"); cap != nullptr && *cap) {
    try {
      std::size_t used = 0;
      options.enumeration_cap = std::stoull(cap, &used);
      if (used != std::string(cap).size()) throw std::invalid_argument(cap);
    } catch (const std::exception&) {
      throw InvalidInputError(std::string("ENUM_CAP is not an integer: ") +
                              cap);
    }
  }
  return options;
}

ContributionGame::ContributionGame(const Instance& instance,
                                   const GameOptions& options)
    : options_(options), oracle_(instance, options.oracle) {
  solo_.reserve(instance.num_agents());
  for (std::size_t i = 0; i < instance.num_agents(); ++i) {
    solo_.push_back(oracle_.individual_sample_complexity(i));
  }
}

double ContributionGame::utility(const ContributionVector& m,
                                 std::size_t agent) const {
  instance().check_contribution(m);
  if (agent >= instance().num_agents()) {
    throw InvalidInputError("agent index out of range");
  }
  const double reward = oracle_.agent_satisfied(m, agent) ? 1.0 : 0.0;
  return reward - instance().agent(agent).cost * static_cast<double>(m[agent]);
}

std::int64_t ContributionGame::best_response(const ContributionVector& m,
                                             std::size_t agent) const {
  instance().check_contribution(m);
  if (agent >= instance().num_agents()) {
    throw InvalidInputError("agent index out of range");
  }
  // Smallest own contribution meeting the requirement. n_i^ind always
  // suffices because the others only add samples.
  std::int64_t lo = 0;
  std::int64_t hi = solo_[agent];
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (oracle_.agent_satisfied(m.with(agent, mid), agent)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const double cost =
      instance().agent(agent).cost * static_cast<double>(lo);
  return cost < 1.0 ? lo : 0;
}

bool ContributionGame::is_pure_ne(const ContributionVector& m) const {
  // Compare utilities rather than strategies: when c_i t = 1 exactly, both 0
  // and t are best replies.
  for (std::size_t i = 0; i < instance().num_agents(); ++i) {
    const std::int64_t br = best_response(m, i);
    if (br == m[i]) continue;
    if (utility(m, i) < utility(m.with(i, br), i) - 1e-12) return false;
  }
  return true;
}

GameOutcome ContributionGame::enumerate_pure_ne() const {
  const std::size_t k = instance().num_agents();
  std::size_t box = 1;
  for (std::int64_t n : solo_) {
    const auto side = static_cast<std::size_t>(n) + 1;
    if (box > options_.enumeration_cap / side) {
      throw CapacityError(
          "strategy box exceeds the enumeration cap of " +
          std::to_string(options_.enumeration_cap) +
          "; use best-response dynamics instead");
    }
    box *= side;
  }

  auto decode = [&](std::size_t index) {
    std::vector<std::int64_t> m(k);
    for (std::size_t i = 0; i < k; ++i) {
      const auto side = static_cast<std::size_t>(solo_[i]) + 1;
      m[i] = static_cast<std::int64_t>(index % side);
      index /= side;
    }
    return ContributionVector(std::move(m));
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(options_.jobs, box));
  std::vector<std::vector<ContributionVector>> shards(jobs);
  auto work = [&](std::size_t shard) {
    const std::size_t begin = box * shard / jobs;
    const std::size_t end = box * (shard + 1) / jobs;
    for (std::size_t index = begin; index < end; ++index) {
      ContributionVector m = decode(index);
      if (is_pure_ne(m)) shards[shard].push_back(std::move(m));
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (std::size_t s = 0; s < jobs; ++s) threads.emplace_back(work, s);
    for (auto& t : threads) t.join();
  }

  GameOutcome out;
  for (auto& shard : shards) {
    for (auto& m : shard) out.pure_ne.push_back(std::move(m));
  }
  std::sort(out.pure_ne.begin(), out.pure_ne.end());
  const auto costs = instance().costs();
  for (const ContributionVector& m : out.pure_ne) {
    const double c = m.cost(costs);
    if (!out.best_ne_cost.has_value() || c < *out.best_ne_cost) {
      out.best_ne_cost = c;
      out.best_ne = m;
    }
  }
  out.status = out.pure_ne.empty() ? "no pure Nash equilibrium"
                                   : std::to_string(out.pure_ne.size()) +
                                         " pure Nash equilibria";
  return out;
}

GameOutcome ContributionGame::price_of_stability() const {
  GameOutcome out = enumerate_pure_ne();
  const std::int64_t cap = *std::max_element(solo_.begin(), solo_.end());
  const ExactResult opt = exact_min_cost_search(oracle_, {.cap = cap});
  out.opt_cost = opt.cost;
  out.optimum = opt.m;
  if (!out.best_ne_cost.has_value()) {
    out.status = "no pure Nash equilibrium; price of stability undefined";
    return out;
  }
  if (opt.cost > 0.0) {
    out.pos = *out.best_ne_cost / opt.cost;
  } else {
    out.pos = *out.best_ne_cost > 0.0
                  ? std::numeric_limits<double>::infinity()
                  : 1.0;
  }
  return out;
}

ContributionGame::Dynamics ContributionGame::best_response_dynamics(
    const ContributionVector& start, std::size_t max_sweeps) const {
  instance().check_contribution(start);
  const std::size_t k = instance().num_agents();
  Dynamics out{start, {}, DynamicsEnd::kSweepLimit};
  std::set<std::pair<std::vector<std::int64_t>, std::size_t>> visited;
  // Converged once k consecutive agents keep their strategy; checked before
  // the revisit test, which would otherwise fire on the quiet sweep itself.
  std::size_t stable = 0;
  for (std::size_t step = 0; step < max_sweeps * k; ++step) {
    if (stable == k) {
      out.end = DynamicsEnd::kConverged;
      return out;
    }
    const std::size_t i = step % k;
    if (!visited.emplace(out.final_profile.counts(), i).second) {
      out.end = DynamicsEnd::kCycle;
      return out;
    }
    const std::int64_t reply = best_response(out.final_profile, i);
    if (reply != out.final_profile[i]) {
      out.trace.push_back({i, out.final_profile[i], reply});
      out.final_profile = out.final_profile.with(i, reply);
      stable = 0;
    } else {
      ++stable;
    }
  }
  if (stable == k) out.end = DynamicsEnd::kConverged;
  return out;
}

std::string to_string(ContributionGame::DynamicsEnd end) {
  switch (end) {
    case ContributionGame::DynamicsEnd::kConverged:
      return "converged";
    case ContributionGame::DynamicsEnd::kCycle:
      return "cycle";
    case ContributionGame::DynamicsEnd::kSweepLimit:
      return "sweep_limit";
  }
  return "unknown";
}

double utility(const Instance& instance, const ContributionVector& m,
               std::size_t agent) {
  const PacOracle oracle(instance);
  instance.check_contribution(m);
  if (agent >= instance.num_agents()) {
    throw InvalidInputError("agent index out of range");
  }
  const double reward = oracle.agent_satisfied(m, agent) ? 1.0 : 0.0;
  return reward - instance.agent(agent).cost * static_cast<double>(m[agent]);
}

std::int64_t best_response(const Instance& instance,
                           const ContributionVector& m, std::size_t agent) {
  return ContributionGame(instance).best_response(m, agent);
}

GameOutcome enumerate_pure_ne(const Instance& instance) {
  return ContributionGame(instance).enumerate_pure_ne();
}

GameOutcome price_of_stability(const Instance& instance) {
  return ContributionGame(instance).price_of_stability();
}

// ---------------------------------------------------------------------------
// Named instances

double self_sufficient_cost(std::size_t num_hypotheses, double epsilon,
                            double delta) {
  const double cap = std::ceil(
      std::log(static_cast<double>(num_hypotheses) / delta) / epsilon);
  return 1.0 / (2.0 * std::max(1.0, cap));
}

Instance nonexistence_instance(double cost) {
  std::vector<AgentSpec> agents = {
      {{1.0 / 3.0, 2.0 / 3.0, 0.0}, cost},
      {{0.0, 1.0 / 3.0, 2.0 / 3.0}, cost},
      {{2.0 / 3.0, 0.0, 1.0 / 3.0}, cost},
  };
  return Instance(3, HypothesisClass::all_labelings(3), std::move(agents),
                  1.0 / 3.0, 2.0 / 3.0);
}

double alice_bob_delta(double epsilon) {
  const double q = 1.0 - 2.0 * epsilon;
  return 1.0 - q * q;
}

Instance alice_bob_instance(double epsilon, double delta,
                            std::optional<double> cost) {
  if (!(epsilon > 0.0 && epsilon < 0.25)) {
    throw InvalidInputError("alice_bob_instance needs epsilon in (0, 1/4)");
  }
  const double c = cost.value_or(self_sufficient_cost(4, epsilon, delta));
  std::vector<AgentSpec> agents = {
      {{1.0 - 2.0 * epsilon, 2.0 * epsilon}, c},
      {{2.0 * epsilon, 1.0 - 2.0 * epsilon}, c},
  };
  return Instance(2, HypothesisClass::all_labelings(2), std::move(agents),
                  epsilon, delta);
}

Instance pos_instance(double epsilon, double delta,
                      std::optional<double> cost) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw InvalidInputError("pos_instance needs epsilon in (0, 1/2)");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidInputError("pos_instance needs delta in (0, 1)");
  }
  // Smallest n >= 1/(2 eps); guard against 1/(2 eps) landing a hair above
  // an integer.
  auto n = static_cast<std::size_t>(std::ceil(1.0 / (2.0 * epsilon) - 1e-9));
  n = std::max<std::size_t>(n, 1);
  if (!exceeds_threshold(1.0 / static_cast<double>(n), epsilon)) {
    throw InvalidInputError("no integer n with 1/(2 eps) <= n < 1/eps");
  }
  const std::size_t size = n + 2;
  const std::size_t y = n;
  const std::size_t z = n + 1;

  std::vector<Hypothesis> hypotheses;
  hypotheses.emplace_back(std::vector<std::uint8_t>(size, 0));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint8_t> labels(size, 0);
    labels[i] = 1;
    labels[z] = 1;
    hypotheses.emplace_back(std::move(labels));
  }
  HypothesisClass cls(std::move(hypotheses));

  const double c = cost.value_or(self_sufficient_cost(cls.size(), epsilon, delta));
  std::vector<double> alice(size, 0.0);
  for (std::size_t i = 0; i < n; ++i) alice[i] = 1.0 / static_cast<double>(n);
  std::vector<double> bob(size, 0.0);
  bob[z] = epsilon;
  bob[y] = 1.0 - epsilon;
  return Instance(size, std::move(cls), {{alice, c}, {bob, c}}, epsilon,
                  delta);
}

}  // namespace cpac
