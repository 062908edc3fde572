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

// Exact minimum-cost integer allocation for small instances.
//
// Vectors are explored best-first in order of cost (lexicographic on ties),
// starting from 0 and stepping one sample at a time. Costs are positive, so
// the first feasible vector popped is optimal.

#ifndef CPAC_EXACT_OPT_H_
#define CPAC_EXACT_OPT_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>

#include "cpac/feasibility.h"
#include "cpac/instance.h"
#include "cpac/planner.h"

namespace cpac {

std::unique_ptr<RequirementOracle> make_oracle(
    const Instance& instance, Objective objective,
    const OracleOptions& options = OracleOptions::from_env());

struct ExactResult {
  ContributionVector m;
  double cost = 0.0;
  std::int64_t cap = 0;
  std::size_t evaluated = 0;  // vectors passed to the oracle
};

struct ExactOptions {
  // Per-agent bound; defaults to the largest individual sample complexity.
  std::optional<std::int64_t> cap;
  std::size_t max_evaluations = 20000000;
};

// Throws InfeasibleError when nothing within the cap is feasible and
// CapacityError when max_evaluations is reached first.
ExactResult exact_min_cost_search(const RequirementOracle& oracle,
                                  const ExactOptions& options = {});

ContributionVector exact_min_cost(const Instance& instance,
                                  Objective objective,
                                  std::optional<std::int64_t> cap = {});

struct RatioReport {
  ContributionVector planner;
  ContributionVector optimum;
  double planner_cost = 0.0;
  double lp_cost = 0.0;
  double optimal_cost = 0.0;
  // planner_cost / optimal_cost, 1 when both are zero.
  double ratio = 1.0;
  // lp_cost / optimal_cost, 1 when both are zero.
  double lp_ratio = 1.0;
};

RatioReport approximation_ratio(const Instance& instance, Objective objective);

}  // namespace cpac

#endif  // CPAC_EXACT_OPT_H_
