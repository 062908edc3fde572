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

#ifndef CPAC_TESTS_TEST_UTIL_H_
#define CPAC_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <string>
#include <vector>

#include "cpac/instance.h"

namespace cpac::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(CPAC_TEST_DATA_DIR) / name;
}

// One agent, hypotheses {all-zero, indicator of `region`} on n points.
inline Instance single_pair_instance(std::size_t n,
                                     const std::vector<std::size_t>& region,
                                     std::vector<double> distribution,
                                     double epsilon, double delta,
                                     double cost = 1.0) {
  std::vector<std::uint8_t> zero(n, 0), one(n, 0);
  for (std::size_t x : region) one[x] = 1;
  return Instance(n, HypothesisClass({Hypothesis(zero), Hypothesis(one)}),
                  {{std::move(distribution), cost}}, epsilon, delta);
}

// Class with a single hypothesis.
inline Instance trivial_instance(std::size_t k, double epsilon = 0.1,
                                 double delta = 0.1) {
  std::vector<AgentSpec> agents(k, AgentSpec{{0.5, 0.5}, 1.0});
  return Instance(2, HypothesisClass({Hypothesis({0, 1})}), std::move(agents),
                  epsilon, delta);
}

}  // namespace cpac::testing

#endif  // CPAC_TESTS_TEST_UTIL_H_
