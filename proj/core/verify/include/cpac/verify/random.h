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

// Seeded generators for property and acceptance suites.

#ifndef CPAC_VERIFY_RANDOM_H_
#define CPAC_VERIFY_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "cpac/instance.h"
#include "cpac/lp.h"
#include "cpac/reduction.h"

namespace cpac::verify {

using Rng = std::mt19937_64;

struct RandomInstanceSpec {
  std::size_t min_agents = 1;
  std::size_t max_agents = 3;
  std::size_t min_hypotheses = 2;
  std::size_t max_hypotheses = 8;
  std::size_t min_domain = 2;
  std::size_t max_domain = 8;
  std::vector<double> epsilons = {0.1, 0.2};
  double delta = 0.1;
  double min_cost = 0.5;
  double max_cost = 2.0;
  // Chance that a point gets zero mass under an agent.
  double zero_mass_probability = 0.2;
};

// Random distinct hypotheses, random sparse distributions, random costs.
Instance random_instance(Rng& rng, const RandomInstanceSpec& spec);

std::vector<double> random_distribution(Rng& rng, std::size_t n,
                                        double zero_mass_probability);

ContributionVector random_contribution(Rng& rng, std::size_t k,
                                       std::int64_t max_total);

// Covering subsets over a universe of 1..max_universe elements.
SetCoverInstance random_set_cover(Rng& rng, std::size_t max_universe,
                                  std::size_t max_subsets);

// Dense LP with nonnegative coefficients and positive costs.
LinearProgram random_lp(Rng& rng, std::size_t max_variables,
                        std::size_t max_rows);

// PWYC table f_i(m) = c_i m_i + C_i on the box prod_i [lo_i, lo_i + side_i).
std::map<ContributionVector, std::vector<double>> random_pwyc_table(
    Rng& rng, const std::vector<double>& costs, std::int64_t max_side);

}  // namespace cpac::verify

#endif  // CPAC_VERIFY_RANDOM_H_
