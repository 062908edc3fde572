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

#include "cpac/reduction.h"

#include <bit>
#include <cstdint>
#include <fstream>

#include "cpac/errors.h"

namespace cpac {

namespace {

constexpr std::size_t kMaxSubsets = 20;

// Smallest popcount over masks in [0, 2^r) accepted by `covers`.
template <typename Pred>
std::size_t min_popcount(std::size_t r, Pred covers) {
  if (r > kMaxSubsets) {
    throw CapacityError("brute force over " + std::to_string(r) +
                        " subsets exceeds the cap of " +
                        std::to_string(kMaxSubsets));
  }
  std::size_t best = r + 1;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << r); ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size < best && covers(mask)) best = size;
  }
  return best;
}

}  // namespace

void SetCoverInstance::validate() const {
  if (universe_size == 0) throw ValidationError("universe must be nonempty");
  if (subsets.empty()) throw ValidationError("need at least one subset");
  std::vector<bool> covered(universe_size, false);
  for (std::size_t j = 0; j < subsets.size(); ++j) {
    for (std::size_t u : subsets[j]) {
      if (u >= universe_size) {
        throw ValidationError("subset " + std::to_string(j) +
                              " names element " + std::to_string(u) +
                              " outside the universe");
      }
      covered[u] = true;
    }
  }
  for (std::size_t u = 0; u < universe_size; ++u) {
    if (!covered[u]) {
      throw ValidationError("element " + std::to_string(u) +
                            " is not in any subset");
    }
  }
}

SetCoverInstance set_cover_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("set cover file must be an object");
  SetCoverInstance sc;
  if (!doc.contains("universe_size") || !doc["universe_size"].is_number_unsigned()) {
    throw ParseError("field 'universe_size' missing or not a nonnegative integer");
  }
  if (!doc.contains("subsets") || !doc["subsets"].is_array()) {
    throw ParseError("field 'subsets' missing or not an array");
  }
  sc.universe_size = doc["universe_size"].get<std::size_t>();
  try {
    sc.subsets = doc["subsets"].get<std::vector<std::vector<std::size_t>>>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError("field 'subsets' must be an array of index arrays");
  }
  sc.validate();
  return sc;
}

nlohmann::json set_cover_to_json(const SetCoverInstance& sc) {
  return {{"universe_size", sc.universe_size}, {"subsets", sc.subsets}};
}

SetCoverInstance load_set_cover(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open set cover file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError("set cover file " + path.string() +
                     " is not valid JSON: " + err.what());
  }
  return set_cover_from_json(doc);
}

ReducedInstance set_cover_to_pac(const SetCoverInstance& sc) {
  sc.validate();
  const std::size_t r = sc.subsets.size();
  const std::size_t n = sc.universe_size;
  const std::size_t size = r + n;

  std::vector<Hypothesis> hs;
  hs.emplace_back(std::vector<std::uint8_t>(size, 0));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint8_t> labels(size, 0);
    for (std::size_t j = 0; j < r; ++j) {
      for (std::size_t u : sc.subsets[j]) {
        if (u == i) labels[j] = 1;
      }
    }
    labels[r + i] = 1;
    hs.emplace_back(std::move(labels));
  }

  std::vector<double> uniform(size, 1.0 / static_cast<double>(size));
  Instance instance(size, HypothesisClass(std::move(hs)), {{uniform, 1.0}},
                    1.0 / (2.0 * static_cast<double>(size)), 0.5);
  return {std::move(instance), r, n};
}

std::size_t min_eliminating_sample_count(const ReducedInstance& reduced,
                                         std::size_t target) {
  const HypothesisClass& hs = reduced.instance.hypotheses();
  if (target >= hs.size()) throw InvalidInputError("target out of range");
  const std::size_t r = reduced.num_subsets;
  // Bitmask over the subset-points of each competitor's disagreement region.
  std::vector<std::uint32_t> regions;
  for (std::size_t h = 0; h < hs.size(); ++h) {
    if (h == target) continue;
    std::uint32_t mask = 0;
    for (std::size_t x : disagreement_region(hs[target], hs[h])) {
      if (x < r) mask |= std::uint32_t{1} << x;
    }
    regions.push_back(mask);
  }
  const std::size_t best = min_popcount(r, [&](std::uint32_t chosen) {
    for (std::uint32_t region : regions) {
      if ((region & chosen) == 0) return false;
    }
    return true;
  });
  if (best > r) {
    throw ValidationError(
        "no set of subset-points eliminates every competitor; the reduction "
        "requires the subsets to cover the universe");
  }
  return best;
}

std::size_t brute_force_set_cover(const SetCoverInstance& sc) {
  sc.validate();
  std::vector<std::uint32_t> containing(sc.universe_size, 0);
  for (std::size_t j = 0; j < sc.subsets.size() && j < 32; ++j) {
    for (std::size_t u : sc.subsets[j]) containing[u] |= std::uint32_t{1} << j;
  }
  return min_popcount(sc.subsets.size(), [&](std::uint32_t chosen) {
    for (std::uint32_t c : containing) {
      if ((c & chosen) == 0) return false;
    }
    return true;
  });
}

}  // namespace cpac
