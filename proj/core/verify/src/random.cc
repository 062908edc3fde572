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

#include "cpac/verify/random.h"

#include <algorithm>
#include <numeric>
#include <set>

namespace cpac::verify {

namespace {

std::size_t uniform_size(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

std::vector<double> random_distribution(Rng& rng, std::size_t n,
                                        double zero_mass_probability) {
  std::exponential_distribution<double> weight(1.0);
  std::bernoulli_distribution zero(zero_mass_probability);
  std::vector<double> d(n, 0.0);
  double total = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    if (zero(rng)) continue;
    d[x] = weight(rng) + 1e-3;
    total += d[x];
  }
  if (total == 0.0) {
    d[uniform_size(rng, 0, n - 1)] = 1.0;
    return d;
  }
  for (double& v : d) v /= total;
  return d;
}

Instance random_instance(Rng& rng, const RandomInstanceSpec& spec) {
  const std::size_t domain = uniform_size(rng, spec.min_domain, spec.max_domain);
  const std::size_t limit =
      domain >= 20 ? spec.max_hypotheses
                   : std::min(spec.max_hypotheses, std::size_t{1} << domain);
  const std::size_t num_h =
      uniform_size(rng, std::min(spec.min_hypotheses, limit), limit);
  std::set<std::vector<std::uint8_t>> seen;
  std::vector<Hypothesis> hs;
  std::bernoulli_distribution coin(0.5);
  while (hs.size() < num_h) {
    std::vector<std::uint8_t> labels(domain);
    for (auto& l : labels) l = coin(rng) ? 1 : 0;
    if (seen.insert(labels).second) hs.emplace_back(std::move(labels));
  }
  const std::size_t k = uniform_size(rng, spec.min_agents, spec.max_agents);
  std::vector<AgentSpec> agents;
  for (std::size_t i = 0; i < k; ++i) {
    agents.push_back({random_distribution(rng, domain, spec.zero_mass_probability),
                      uniform_real(rng, spec.min_cost, spec.max_cost)});
  }
  const double eps =
      spec.epsilons[uniform_size(rng, 0, spec.epsilons.size() - 1)];
  return Instance(domain, HypothesisClass(std::move(hs)), std::move(agents), eps,
                  spec.delta);
}

ContributionVector random_contribution(Rng& rng, std::size_t k,
                                       std::int64_t max_total) {
  std::vector<std::int64_t> m(k, 0);
  const auto total = std::uniform_int_distribution<std::int64_t>(0, max_total)(rng);
  for (std::int64_t s = 0; s < total; ++s) ++m[uniform_size(rng, 0, k - 1)];
  return ContributionVector(std::move(m));
}

SetCoverInstance random_set_cover(Rng& rng, std::size_t max_universe,
                                  std::size_t max_subsets) {
  SetCoverInstance sc;
  sc.universe_size = uniform_size(rng, 1, max_universe);
  const std::size_t r = uniform_size(rng, 1, max_subsets);
  std::bernoulli_distribution member(0.35);
  sc.subsets.assign(r, {});
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t u = 0; u < sc.universe_size; ++u) {
      if (member(rng)) sc.subsets[j].push_back(u);
    }
  }
  // Patch uncovered elements into a random subset so the instance is valid.
  for (std::size_t u = 0; u < sc.universe_size; ++u) {
    const bool covered = std::any_of(
        sc.subsets.begin(), sc.subsets.end(), [&](const auto& s) {
          return std::find(s.begin(), s.end(), u) != s.end();
        });
    if (!covered) {
      auto& s = sc.subsets[uniform_size(rng, 0, r - 1)];
      s.insert(std::upper_bound(s.begin(), s.end(), u), u);
    }
  }
  return sc;
}

LinearProgram random_lp(Rng& rng, std::size_t max_variables,
                        std::size_t max_rows) {
  LinearProgram lp;
  const std::size_t n = uniform_size(rng, 1, max_variables);
  const std::size_t rows = uniform_size(rng, 1, max_rows);
  std::bernoulli_distribution sparse(0.25);
  for (std::size_t j = 0; j < n; ++j) {
    lp.costs.push_back(uniform_real(rng, 0.2, 3.0));
  }
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> row(n);
    for (double& a : row) a = sparse(rng) ? 0.0 : uniform_real(rng, 0.0, 4.0);
    lp.constraint_matrix.push_back(std::move(row));
    lp.rhs.push_back(uniform_real(rng, 0.0, 5.0));
  }
  return lp;
}

std::map<ContributionVector, std::vector<double>> random_pwyc_table(
    Rng& rng, const std::vector<double>& costs, std::int64_t max_side) {
  const std::size_t k = costs.size();
  std::vector<std::int64_t> lo(k), side(k);
  std::vector<double> constants(k);
  for (std::size_t i = 0; i < k; ++i) {
    lo[i] = std::uniform_int_distribution<std::int64_t>(0, 20)(rng);
    side[i] = std::uniform_int_distribution<std::int64_t>(1, max_side)(rng);
    constants[i] = uniform_real(rng, -5.0, 5.0);
  }
  std::map<ContributionVector, std::vector<double>> table;
  std::vector<std::int64_t> offset(k, 0);
  for (;;) {
    std::vector<std::int64_t> m(k);
    std::vector<double> f(k);
    for (std::size_t i = 0; i < k; ++i) {
      m[i] = lo[i] + offset[i];
      f[i] = costs[i] * static_cast<double>(m[i]) + constants[i];
    }
    table.emplace(ContributionVector(std::move(m)), std::move(f));
    std::size_t i = 0;
    while (i < k && ++offset[i] == side[i]) offset[i++] = 0;
    if (i == k) break;
  }
  return table;
}

}  // namespace cpac::verify
