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

// Domain model for collaborative sample allocation: a finite domain, a finite
// class of binary hypotheses over it, and a set of agents each holding a
// marginal distribution over the domain and a per-sample cost.
//
// Everything here is immutable after construction and validated eagerly.

#ifndef CPAC_INSTANCE_H_
#define CPAC_INSTANCE_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cpac {

// Distributions must sum to one within this tolerance.
inline constexpr double kDistributionTolerance = 1e-9;

// Masses within this distance of a threshold count as "not above" it. All
// strict comparisons against epsilon (and epsilon/2) go through
// `exceeds_threshold` so the planner and the oracles agree on which
// hypotheses are bad.
inline constexpr double kMassTolerance = 1e-12;

inline bool exceeds_threshold(double mass, double threshold) {
  return mass > threshold + kMassTolerance;
}

// Point indices of a finite domain, ascending.
using PointSet = std::vector<std::size_t>;

struct Domain {
  std::size_t size = 0;
  friend bool operator==(const Domain&, const Domain&) = default;
};

class Hypothesis {
 public:
  Hypothesis() = default;
  // Labels must be 0 or 1.
  explicit Hypothesis(std::vector<std::uint8_t> labels);
  Hypothesis(std::initializer_list<int> labels);

  std::size_t size() const { return labels_.size(); }
  std::uint8_t operator[](std::size_t x) const { return labels_[x]; }
  std::span<const std::uint8_t> labels() const { return labels_; }

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
  friend auto operator<=>(const Hypothesis&, const Hypothesis&) = default;

 private:
  std::vector<std::uint8_t> labels_;
};

// Ordered, duplicate-free, nonempty list of hypotheses of equal length.
class HypothesisClass {
 public:
  explicit HypothesisClass(std::vector<Hypothesis> hypotheses);

  // Every labeling of `domain_size` points; hypothesis j labels point x with
  // bit x of j. Requires domain_size <= 20.
  static HypothesisClass all_labelings(std::size_t domain_size);

  std::size_t size() const { return hypotheses_.size(); }
  std::size_t domain_size() const { return hypotheses_.front().size(); }
  const Hypothesis& operator[](std::size_t j) const { return hypotheses_[j]; }
  const std::vector<Hypothesis>& hypotheses() const { return hypotheses_; }
  auto begin() const { return hypotheses_.begin(); }
  auto end() const { return hypotheses_.end(); }

  friend bool operator==(const HypothesisClass&,
                         const HypothesisClass&) = default;

 private:
  std::vector<Hypothesis> hypotheses_;
};

struct AgentSpec {
  std::vector<double> distribution;
  double cost = 1.0;

  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

// Non-negative integer sample counts, one per agent.
class ContributionVector {
 public:
  ContributionVector() = default;
  explicit ContributionVector(std::vector<std::int64_t> counts);
  ContributionVector(std::initializer_list<std::int64_t> counts);
  static ContributionVector zeros(std::size_t k) {
    return ContributionVector(std::vector<std::int64_t>(k, 0));
  }

  std::size_t size() const { return counts_.size(); }
  std::int64_t operator[](std::size_t i) const { return counts_[i]; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t total() const;
  double cost(std::span<const double> costs) const;

  ContributionVector with(std::size_t i, std::int64_t value) const;
  // Componentwise m <= other.
  bool dominated_by(const ContributionVector& other) const;

  std::string to_string() const;

  friend bool operator==(const ContributionVector&,
                         const ContributionVector&) = default;
  friend auto operator<=>(const ContributionVector&,
                          const ContributionVector&) = default;

 private:
  std::vector<std::int64_t> counts_;
};

class Instance {
 public:
  Instance(std::size_t domain_size, HypothesisClass hypotheses,
           std::vector<AgentSpec> agents, double epsilon, double delta);

  const Domain& domain() const { return domain_; }
  const HypothesisClass& hypotheses() const { return hypotheses_; }
  const std::vector<AgentSpec>& agents() const { return agents_; }
  const AgentSpec& agent(std::size_t i) const { return agents_[i]; }
  std::size_t num_agents() const { return agents_.size(); }
  std::size_t num_hypotheses() const { return hypotheses_.size(); }
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  std::vector<double> costs() const;

  Instance with_epsilon(double epsilon) const;
  Instance with_delta(double delta) const;
  Instance with_agents(std::vector<AgentSpec> agents) const;
  Instance with_hypotheses(HypothesisClass hypotheses) const;

  // Throws InvalidInputError unless m has one entry per agent.
  void check_contribution(const ContributionVector& m) const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  Domain domain_;
  HypothesisClass hypotheses_;
  std::vector<AgentSpec> agents_;
  double epsilon_;
  double delta_;
};

// {x : h1(x) != h2(x)}, ascending.
PointSet disagreement_region(const Hypothesis& h1, const Hypothesis& h2);

double region_mass(std::span<const double> distribution,
                   std::span<const std::size_t> region);

// D(DIS(h1, h2)) clamped into [0, 1].
double disagreement_mass(const AgentSpec& agent, const Hypothesis& h1,
                         const Hypothesis& h2);

// Indices of hypotheses that agree with `target` on every point of `sample`.
std::vector<std::size_t> consistent_hypotheses(
    const HypothesisClass& hypotheses, std::size_t target,
    std::span<const std::size_t> sample);

// JSON document layout, "format": 1.
nlohmann::json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& doc);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);

}  // namespace cpac

#endif  // CPAC_INSTANCE_H_
