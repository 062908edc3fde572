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

// LP relaxations of the minimum-cost allocation problem and the scaling
// pipeline for classes too large to plan over directly.
//
// PAC relaxation: for each unordered pair (h1, h2) that some agent can tell
// apart by more than epsilon,
//
//   sum_i m_i log(1 / (1 - D_i(DIS(h1, h2)))) >= log(H / delta),
//
// i.e. the pair's disagreement region is missed with probability at most
// delta / H; a union bound over pairs then gives the PAC guarantee.

#ifndef CPAC_PLANNER_H_
#define CPAC_PLANNER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpac/instance.h"
#include "cpac/lp.h"

namespace cpac {

enum class Objective { kPac, kExpected };

std::string to_string(Objective objective);
// Accepts "pac" or "expected".
Objective objective_from_string(const std::string& name);

// Masses are clamped to 1 - 1e-12 before taking the log.
inline constexpr double kMaxLogMass = 1.0 - 1e-12;
double log_miss_coefficient(double mass);

// Row tags have the form "h1,h2" with h1 < h2.
std::string pair_tag(std::size_t h1, std::size_t h2);
std::pair<std::size_t, std::size_t> parse_pair_tag(const std::string& tag);

LinearProgram build_pac_lp(const Instance& instance);

// Rows for pairs whose largest per-agent mass exceeds epsilon/2, with
// rhs log(2 H a / epsilon) where a is the smallest mass among the agents
// above epsilon/2.
LinearProgram build_expected_lp(const Instance& instance);

// Per-coordinate ceiling; values within 1e-9 above an integer round down to
// it so solver noise does not cost a sample.
ContributionVector round_up(const std::vector<double>& x);

struct PlanResult {
  ContributionVector m;
  LpSolution lp;
  std::size_t rows = 0;
  double lp_cost = 0.0;       // c'x before rounding
  double rounded_cost = 0.0;  // c'm
};

PlanResult plan_pac(const Instance& instance);
PlanResult plan_expected(const Instance& instance);

ContributionVector solve_pac_allocation(const Instance& instance);
ContributionVector solve_expected_allocation(const Instance& instance);

// Greedy cover by index: a hypothesis joins the cover unless an existing
// member is within gamma / k of it under the uniform mixture of the agents'
// distributions. Every hypothesis then has a member within gamma under each
// agent.
HypothesisClass gamma_cover(const HypothesisClass& hypotheses,
                            const std::vector<AgentSpec>& agents,
                            double gamma);

struct PipelineParams {
  std::optional<double> gamma;
  std::optional<double> delta_prime;
  std::optional<double> delta_double_prime;
  std::optional<double> scale_d;  // default ceil(log2 H)
};

struct PipelineResult {
  ContributionVector m;     // scaled
  ContributionVector base;  // planner output on the cover
  HypothesisClass cover;
  double gamma = 0.0;
  double delta_prime = 0.0;
  double delta_double_prime = 0.0;
  double scale_d = 0.0;
  std::int64_t multiplier = 1;
};

// Plans on the gamma-cover at confidence delta_prime, then multiplies every
// count by ceil(scale_d + ln(1 / delta_double_prime)).
PipelineResult infinite_class_pipeline(const Instance& instance,
                                       const PipelineParams& params = {});

}  // namespace cpac

#endif  // CPAC_PLANNER_H_
