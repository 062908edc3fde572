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

// Set Cover as a single-agent allocation problem.
//
// Subsets E_1..E_r become points x_1..x_r and elements u_1..u_n become points
// y_1..y_n. The target labels everything negative; hypothesis h_i is positive
// on x_j exactly when u_i is in E_j, and on y_i alone among the y's. A sample
// rules out h_i iff it contains some x_j with u_i in E_j (or y_i), so the
// fewest distinct x-points that leave only the target consistent is the
// minimum cover size.

#ifndef CPAC_REDUCTION_H_
#define CPAC_REDUCTION_H_

#include <cstddef>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpac/instance.h"

namespace cpac {

struct SetCoverInstance {
  std::size_t universe_size = 0;
  std::vector<std::vector<std::size_t>> subsets;

  // Throws ValidationError unless indices are in range and the subsets
  // cover the universe.
  void validate() const;
};

SetCoverInstance set_cover_from_json(const nlohmann::json& doc);
nlohmann::json set_cover_to_json(const SetCoverInstance& sc);
SetCoverInstance load_set_cover(const std::filesystem::path& path);

struct ReducedInstance {
  Instance instance;
  std::size_t num_subsets = 0;   // r: points 0..r-1
  std::size_t num_elements = 0;  // n: points r..r+n-1
};

// Hypothesis 0 is the target; hypothesis i (1-based) encodes element u_i.
// epsilon = 1 / (2 (r + n)), delta = 0.5.
ReducedInstance set_cover_to_pac(const SetCoverInstance& sc);

// Fewest distinct subset-points whose presence in the sample leaves the
// target as the only consistent hypothesis. Brute force over subsets of the
// first r points; r <= 20.
std::size_t min_eliminating_sample_count(const ReducedInstance& reduced,
                                         std::size_t target = 0);

// Minimum number of subsets covering the universe; r <= 20.
std::size_t brute_force_set_cover(const SetCoverInstance& sc);

}  // namespace cpac

#endif  // CPAC_REDUCTION_H_
