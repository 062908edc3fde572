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

#include "cpac/exact_opt.h"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <vector>

#include "cpac/errors.h"

namespace cpac {

std::unique_ptr<RequirementOracle> make_oracle(const Instance& instance,
                                               Objective objective,
                                               const OracleOptions& options) {
  if (objective == Objective::kPac) {
    return std::make_unique<PacOracle>(instance, options);
  }
  return std::make_unique<ExpectedOracle>(instance, options);
}

namespace {

struct Node {
  double cost;
  std::vector<std::int64_t> m;
};

struct Later {
  bool operator()(const Node& a, const Node& b) const {
    if (a.cost != b.cost) return a.cost > b.cost;
    return a.m > b.m;
  }
};

double cost_of(const std::vector<std::int64_t>& m,
               const std::vector<double>& costs) {
  double total = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    total += costs[i] * static_cast<double>(m[i]);
  }
  return total;
}

}  // namespace

ExactResult exact_min_cost_search(const RequirementOracle& oracle,
                                  const ExactOptions& options) {
  const Instance& instance = oracle.instance();
  const std::size_t k = instance.num_agents();
  const std::vector<double> costs = instance.costs();

  ExactResult out;
  if (options.cap.has_value()) {
    if (*options.cap < 0) throw InvalidInputError("cap must be nonnegative");
    out.cap = *options.cap;
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      out.cap = std::max(out.cap, oracle.individual_sample_complexity(i));
    }
  }

  std::priority_queue<Node, std::vector<Node>, Later> frontier;
  std::set<std::vector<std::int64_t>> queued;
  std::vector<std::int64_t> origin(k, 0);
  frontier.push({0.0, origin});
  queued.insert(origin);

  while (!frontier.empty()) {
    Node node = frontier.top();
    frontier.pop();
    if (out.evaluated == options.max_evaluations) {
      throw CapacityError("exact search exceeded " +
                          std::to_string(options.max_evaluations) +
                          " oracle evaluations");
    }
    ++out.evaluated;
    const ContributionVector m(node.m);
    if (oracle.feasible(m)) {
      out.m = m;
      out.cost = node.cost;
      return out;
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (node.m[i] >= out.cap) continue;
      std::vector<std::int64_t> next = node.m;
      ++next[i];
      if (!queued.insert(next).second) continue;
      const double c = cost_of(next, costs);
      frontier.push({c, std::move(next)});
    }
  }
  throw InfeasibleError("no feasible contribution vector with every entry <= " +
                        std::to_string(out.cap));
}

ContributionVector exact_min_cost(const Instance& instance,
                                  Objective objective,
                                  std::optional<std::int64_t> cap) {
  const auto oracle = make_oracle(instance, objective);
  return exact_min_cost_search(*oracle, {.cap = cap}).m;
}

RatioReport approximation_ratio(const Instance& instance,
                                Objective objective) {
  RatioReport out;
  const PlanResult plan = objective == Objective::kPac
                              ? plan_pac(instance)
                              : plan_expected(instance);
  out.planner = plan.m;
  out.planner_cost = plan.rounded_cost;
  out.lp_cost = plan.lp_cost;
  const auto oracle = make_oracle(instance, objective);
  const ExactResult exact = exact_min_cost_search(*oracle);
  out.optimum = exact.m;
  out.optimal_cost = exact.cost;
  auto ratio = [&](double numerator) {
    if (out.optimal_cost > 0.0) return numerator / out.optimal_cost;
    return numerator > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  };
  out.ratio = ratio(out.planner_cost);
  out.lp_ratio = ratio(out.lp_cost);
  return out;
}

}  // namespace cpac
