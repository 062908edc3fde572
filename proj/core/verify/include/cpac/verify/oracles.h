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

// Slow, direct reference implementations used to check the library. None of
// these share code with the routines they check beyond the instance model.

#ifndef CPAC_VERIFY_ORACLES_H_
#define CPAC_VERIFY_ORACLES_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cpac/instance.h"
#include "cpac/lp.h"

namespace cpac::verify {

// Probability of each set of seen points after every agent draws its m_i
// samples, obtained by walking through the draws one at a time. Domain size
// must be at most 20.
std::vector<long double> seen_set_distribution(const Instance& instance,
                                               const ContributionVector& m);

// P(worst consistent hypothesis has error above epsilon) by summing over
// seen sets.
double enumerate_pac_failure(const Instance& instance,
                             const ContributionVector& m, std::size_t target,
                             std::size_t agent);

// E[error of the worst consistent hypothesis] by summing over seen sets.
double enumerate_expected_error(const Instance& instance,
                                const ContributionVector& m,
                                std::size_t target, std::size_t agent);

// Minimizes c'x over Ax >= b, x >= 0 by trying every basis of n tight
// constraints. Returns nullopt when no vertex is feasible.
struct VertexOptimum {
  double objective = 0.0;
  std::vector<double> x;
};
std::optional<VertexOptimum> vertex_enumeration(const LinearProgram& lp);

// Cheapest vector in [0, cap]^k accepted by `feasible`, scanning the whole
// box. Ties go to the lexicographically smallest vector.
std::optional<ContributionVector> scan_min_cost(
    std::size_t k, std::int64_t cap, const std::vector<double>& costs,
    const std::function<bool(const ContributionVector&)>& feasible);

}  // namespace cpac::verify

#endif  // CPAC_VERIFY_ORACLES_H_
