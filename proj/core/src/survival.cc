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

#include "cpac/survival.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "cpac/errors.h"

namespace cpac {

namespace {

bool test_bit(const std::vector<std::uint64_t>& words, std::size_t bit) {
  return (words[bit / 64] >> (bit % 64)) & 1U;
}

void set_bit(std::vector<std::uint64_t>& words, std::size_t bit) {
  words[bit / 64] |= std::uint64_t{1} << (bit % 64);
}

void clear_bit(std::vector<std::uint64_t>& words, std::size_t bit) {
  words[bit / 64] &= ~(std::uint64_t{1} << (bit % 64));
}

}  // namespace

double SurvivalExpansion::probability_all_hit(
    std::span<const std::int64_t> m) const {
  if (coefficients_.empty()) return 1.0;
  if (m.size() != num_agents_) {
    throw InvalidInputError("contribution vector length mismatch");
  }
  long double total = 0.0L;
  for (std::size_t t = 0; t < coefficients_.size(); ++t) {
    const double* row = &log_miss_[t * num_agents_];
    long double exponent = 0.0L;
    bool vanishes = false;
    for (std::size_t i = 0; i < num_agents_; ++i) {
      if (m[i] == 0) continue;
      if (std::isinf(row[i])) {
        vanishes = true;
        break;
      }
      exponent += static_cast<long double>(m[i]) * row[i];
    }
    if (vanishes) continue;
    total += static_cast<long double>(coefficients_[t]) * std::exp(exponent);
  }
  return std::clamp(static_cast<double>(total), 0.0, 1.0);
}

SurvivalExpansionBuilder::SurvivalExpansionBuilder(
    std::span<const std::vector<double>> distributions,
    std::vector<PointSet> regions, std::size_t max_terms)
    : num_agents_(distributions.size()), max_terms_(max_terms) {
  const std::size_t n = distributions.empty() ? 0 : distributions[0].size();
  // Group points by which regions contain them; each group is an atom.
  std::map<std::vector<std::uint64_t>, std::size_t> atom_of_signature;
  std::vector<std::vector<std::uint64_t>> signature(
      n, std::vector<std::uint64_t>((regions.size() + 63) / 64, 0));
  std::vector<bool> used(n, false);
  for (std::size_t r = 0; r < regions.size(); ++r) {
    for (std::size_t x : regions[r]) {
      if (x >= n) throw InvalidInputError("region point outside the domain");
      set_bit(signature[x], r);
      used[x] = true;
    }
  }
  std::vector<std::size_t> atom_of_point(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    if (!used[x]) continue;
    auto [it, inserted] =
        atom_of_signature.emplace(signature[x], atom_of_signature.size());
    atom_of_point[x] = it->second;
  }
  num_atoms_ = atom_of_signature.size();
  words_ = std::max<std::size_t>(1, (num_atoms_ + 63) / 64);
  atom_mass_.assign(num_atoms_, std::vector<double>(num_agents_, 0.0));
  for (std::size_t x = 0; x < n; ++x) {
    if (!used[x]) continue;
    for (std::size_t i = 0; i < num_agents_; ++i) {
      atom_mass_[atom_of_point[x]][i] += distributions[i][x];
    }
  }
  last_use_.assign(num_atoms_, 0);
  regions_.reserve(regions.size());
  for (std::size_t r = 0; r < regions.size(); ++r) {
    std::vector<std::uint64_t> mask(words_, 0);
    for (std::size_t x : regions[r]) {
      const std::size_t a = atom_of_point[x];
      set_bit(mask, a);
      last_use_[a] = r;
    }
    regions_.push_back(std::move(mask));
  }
  terms_.emplace(Key{std::vector<std::uint64_t>(words_, 0),
                     std::vector<double>(num_agents_, 0.0)},
                 1);
}

void SurvivalExpansionBuilder::add_next() {
  if (done()) return;
  const std::size_t r = added_;
  const std::vector<std::uint64_t>& region = regions_[r];

  std::vector<std::size_t> expiring;
  for (std::size_t a = 0; a < num_atoms_; ++a) {
    if (last_use_[a] == r && test_bit(region, a)) expiring.push_back(a);
  }
  // Atoms used by an earlier region may also expire here only if this region
  // is their last use, which implies they are in `region`.

  auto forget = [&](Key key) {
    for (std::size_t a : expiring) {
      if (test_bit(key.atoms, a)) {
        clear_bit(key.atoms, a);
        for (std::size_t i = 0; i < num_agents_; ++i) {
          key.forgotten[i] += atom_mass_[a][i];
        }
      }
    }
    return key;
  };

  std::map<Key, std::int64_t> next;
  for (const auto& [key, coefficient] : terms_) {
    next[forget(key)] += coefficient;
    Key joined = key;
    for (std::size_t w = 0; w < words_; ++w) joined.atoms[w] |= region[w];
    next[forget(std::move(joined))] -= coefficient;
  }
  std::erase_if(next, [](const auto& kv) { return kv.second == 0; });
  if (next.size() > max_terms_) {
    throw CapacityError("inclusion-exclusion expansion exceeds " +
                        std::to_string(max_terms_) + " terms");
  }
  terms_ = std::move(next);
  ++added_;
}

void SurvivalExpansionBuilder::add_all() {
  while (!done()) add_next();
}

SurvivalExpansion SurvivalExpansionBuilder::snapshot() const {
  SurvivalExpansion out;
  out.num_agents_ = num_agents_;
  out.coefficients_.reserve(terms_.size());
  out.log_miss_.reserve(terms_.size() * num_agents_);
  for (const auto& [key, coefficient] : terms_) {
    out.coefficients_.push_back(static_cast<double>(coefficient));
    for (std::size_t i = 0; i < num_agents_; ++i) {
      double mass = key.forgotten[i];
      for (std::size_t a = 0; a < num_atoms_; ++a) {
        if (test_bit(key.atoms, a)) mass += atom_mass_[a][i];
      }
      mass = std::clamp(mass, 0.0, 1.0);
      out.log_miss_.push_back(mass >= 1.0
                                  ? -std::numeric_limits<double>::infinity()
                                  : std::log1p(-mass));
    }
  }
  return out;
}

}  // namespace cpac
