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

// Exact probability that every region in a family receives at least one
// sample when agent i draws m_i points i.i.d. from its distribution.
//
// By inclusion-exclusion,
//
//   P(all regions hit) = sum_{T subset of regions} (-1)^|T|
//                          prod_i (1 - D_i(union of T))^{m_i}.
//
// The sum depends on T only through the union, so the builder folds regions
// in one at a time and keeps a map from union to signed multiplicity. Points
// that no later region touches are "forgotten": their mass is folded into a
// per-agent scalar so unions that differ only in forgotten points of equal
// mass collapse into a single term. For families of regions sharing a small
// core (coupon-collector style) this turns 2^|T| terms into O(|T|^2).
//
// The expansion depends only on the regions and the distributions, not on
// the contribution vector, so it is built once and evaluated many times.

#ifndef CPAC_SURVIVAL_H_
#define CPAC_SURVIVAL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "cpac/instance.h"

namespace cpac {

class SurvivalExpansion {
 public:
  SurvivalExpansion() = default;

  // P(every region is hit) under contributions m. Returns 1 for an empty
  // family.
  double probability_all_hit(std::span<const std::int64_t> m) const;

  std::size_t num_terms() const { return coefficients_.size(); }
  std::size_t num_agents() const { return num_agents_; }

 private:
  friend class SurvivalExpansionBuilder;

  std::size_t num_agents_ = 0;
  std::vector<double> coefficients_;
  // num_terms x num_agents, row-major: log(1 - D_i(union)); -inf when the
  // union carries all of agent i's mass.
  std::vector<double> log_miss_;
};

class SurvivalExpansionBuilder {
 public:
  // `distributions` is one vector per agent over the full domain. Throws
  // CapacityError if the number of live terms ever exceeds `max_terms`.
  SurvivalExpansionBuilder(std::span<const std::vector<double>> distributions,
                           std::vector<PointSet> regions,
                           std::size_t max_terms);

  std::size_t num_regions() const { return regions_.size(); }
  std::size_t num_added() const { return added_; }
  bool done() const { return added_ == regions_.size(); }

  // Folds in the next region, in construction order.
  void add_next();
  void add_all();

  // Expansion over the regions folded in so far.
  SurvivalExpansion snapshot() const;

 private:
  struct Key {
    std::vector<std::uint64_t> atoms;
    std::vector<double> forgotten;
    friend auto operator<=>(const Key&, const Key&) = default;
  };

  std::size_t num_agents_;
  std::size_t num_atoms_ = 0;
  std::size_t words_ = 0;
  std::size_t max_terms_;
  std::vector<std::vector<std::uint64_t>> regions_;  // atom bitmasks
  std::vector<std::vector<double>> atom_mass_;       // atom -> agent -> mass
  std::vector<std::size_t> last_use_;                // atom -> region index
  std::size_t added_ = 0;
  std::map<Key, std::int64_t> terms_;
};

}  // namespace cpac

#endif  // CPAC_SURVIVAL_H_
