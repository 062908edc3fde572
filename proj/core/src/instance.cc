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

#include "cpac/instance.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "cpac/errors.h"

namespace cpac {

namespace {

constexpr int kFormatVersion = 1;

std::vector<std::uint8_t> to_labels(std::initializer_list<int> labels) {
  std::vector<std::uint8_t> out;
  out.reserve(labels.size());
  for (int v : labels) {
    if (v != 0 && v != 1) {
      throw InvalidInputError("hypothesis labels must be 0 or 1");
    }
    out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

void validate_agent(const AgentSpec& agent, std::size_t index,
                    std::size_t domain_size) {
  const std::string who = "agent " + std::to_string(index);
  if (agent.distribution.size() != domain_size) {
    throw ValidationError(who + ": distribution has " +
                          std::to_string(agent.distribution.size()) +
                          " entries, domain has " +
                          std::to_string(domain_size));
  }
  double sum = 0.0;
  for (double p : agent.distribution) {
    if (!std::isfinite(p) || p < 0.0) {
      throw ValidationError(who + ": probabilities must be finite and >= 0");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDistributionTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << who << ": distribution sums to " << sum << ", expected 1";
    throw ValidationError(msg.str());
  }
  if (!std::isfinite(agent.cost) || agent.cost <= 0.0) {
    throw ValidationError(who + ": cost must be > 0");
  }
}

template <typename T>
T field(const nlohmann::json& doc, const char* name) {
  if (!doc.contains(name)) {
    throw ParseError(std::string("missing field '") + name + "'");
  }
  try {
    return doc.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("field '") + name + "': " + e.what());
  }
}

}  // namespace

Hypothesis::Hypothesis(std::vector<std::uint8_t> labels)
    : labels_(std::move(labels)) {
  for (std::uint8_t v : labels_) {
    if (v > 1) throw InvalidInputError("hypothesis labels must be 0 or 1");
  }
}

Hypothesis::Hypothesis(std::initializer_list<int> labels)
    : labels_(to_labels(labels)) {}

HypothesisClass::HypothesisClass(std::vector<Hypothesis> hypotheses)
    : hypotheses_(std::move(hypotheses)) {
  if (hypotheses_.empty()) {
    throw ValidationError("hypothesis class must be nonempty");
  }
  const std::size_t n = hypotheses_.front().size();
  if (n == 0) throw ValidationError("hypotheses must label at least one point");
  std::set<Hypothesis> seen;
  for (std::size_t j = 0; j < hypotheses_.size(); ++j) {
    if (hypotheses_[j].size() != n) {
      throw ValidationError("hypothesis " + std::to_string(j) +
                            " has a different length");
    }
    if (!seen.insert(hypotheses_[j]).second) {
      throw ValidationError("hypothesis " + std::to_string(j) +
                            " duplicates an earlier label vector");
    }
  }
}

HypothesisClass HypothesisClass::all_labelings(std::size_t domain_size) {
  if (domain_size == 0 || domain_size > 20) {
    throw InvalidInputError("all_labelings supports 1..20 points");
  }
  std::vector<Hypothesis> out;
  const std::size_t count = std::size_t{1} << domain_size;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    std::vector<std::uint8_t> labels(domain_size);
    for (std::size_t x = 0; x < domain_size; ++x) labels[x] = (j >> x) & 1U;
    out.emplace_back(std::move(labels));
  }
  return HypothesisClass(std::move(out));
}

ContributionVector::ContributionVector(std::vector<std::int64_t> counts)
    : counts_(std::move(counts)) {
  for (std::int64_t c : counts_) {
    if (c < 0) throw InvalidInputError("contributions must be >= 0");
  }
}

ContributionVector::ContributionVector(
    std::initializer_list<std::int64_t> counts)
    : ContributionVector(std::vector<std::int64_t>(counts)) {}

std::int64_t ContributionVector::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

double ContributionVector::cost(std::span<const double> costs) const {
  if (costs.size() != counts_.size()) {
    throw InvalidInputError("cost vector length does not match contributions");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    total += costs[i] * static_cast<double>(counts_[i]);
  }
  return total;
}

ContributionVector ContributionVector::with(std::size_t i,
                                            std::int64_t value) const {
  std::vector<std::int64_t> counts = counts_;
  counts.at(i) = value;
  return ContributionVector(std::move(counts));
}

bool ContributionVector::dominated_by(const ContributionVector& other) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (counts_[i] > other.counts_[i]) return false;
  }
  return true;
}

std::string ContributionVector::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(counts_[i]);
  }
  return out + ")";
}

Instance::Instance(std::size_t domain_size, HypothesisClass hypotheses,
                   std::vector<AgentSpec> agents, double epsilon, double delta)
    : domain_{domain_size},
      hypotheses_(std::move(hypotheses)),
      agents_(std::move(agents)),
      epsilon_(epsilon),
      delta_(delta) {
  if (domain_size == 0) throw ValidationError("domain size must be >= 1");
  if (hypotheses_.domain_size() != domain_size) {
    throw ValidationError("hypotheses label " +
                          std::to_string(hypotheses_.domain_size()) +
                          " points, domain has " + std::to_string(domain_size));
  }
  if (agents_.empty()) throw ValidationError("need at least one agent");
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    validate_agent(agents_[i], i, domain_size);
  }
  if (!(epsilon_ > 0.0 && epsilon_ < 1.0)) {
    throw ValidationError("epsilon must lie in (0, 1)");
  }
  if (!(delta_ > 0.0 && delta_ < 1.0)) {
    throw ValidationError("delta must lie in (0, 1)");
  }
}

std::vector<double> Instance::costs() const {
  std::vector<double> out;
  out.reserve(agents_.size());
  for (const AgentSpec& a : agents_) out.push_back(a.cost);
  return out;
}

Instance Instance::with_epsilon(double epsilon) const {
  return Instance(domain_.size, hypotheses_, agents_, epsilon, delta_);
}

Instance Instance::with_delta(double delta) const {
  return Instance(domain_.size, hypotheses_, agents_, epsilon_, delta);
}

Instance Instance::with_agents(std::vector<AgentSpec> agents) const {
  return Instance(domain_.size, hypotheses_, std::move(agents), epsilon_,
                  delta_);
}

Instance Instance::with_hypotheses(HypothesisClass hypotheses) const {
  return Instance(domain_.size, std::move(hypotheses), agents_, epsilon_,
                  delta_);
}

void Instance::check_contribution(const ContributionVector& m) const {
  if (m.size() != agents_.size()) {
    throw InvalidInputError("contribution vector has " +
                            std::to_string(m.size()) + " entries, instance has " +
                            std::to_string(agents_.size()) + " agents");
  }
}

PointSet disagreement_region(const Hypothesis& h1, const Hypothesis& h2) {
  if (h1.size() != h2.size()) {
    throw InvalidInputError("hypotheses have different lengths");
  }
  PointSet out;
  for (std::size_t x = 0; x < h1.size(); ++x) {
    if (h1[x] != h2[x]) out.push_back(x);
  }
  return out;
}

double region_mass(std::span<const double> distribution,
                   std::span<const std::size_t> region) {
  double mass = 0.0;
  for (std::size_t x : region) {
    if (x >= distribution.size()) {
      throw InvalidInputError("region point outside the domain");
    }
    mass += distribution[x];
  }
  return std::clamp(mass, 0.0, 1.0);
}

double disagreement_mass(const AgentSpec& agent, const Hypothesis& h1,
                         const Hypothesis& h2) {
  if (agent.distribution.size() != h1.size()) {
    throw InvalidInputError("distribution and hypothesis lengths differ");
  }
  return region_mass(agent.distribution, disagreement_region(h1, h2));
}

std::vector<std::size_t> consistent_hypotheses(
    const HypothesisClass& hypotheses, std::size_t target,
    std::span<const std::size_t> sample) {
  const Hypothesis& truth = hypotheses[target];
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < hypotheses.size(); ++j) {
    const Hypothesis& h = hypotheses[j];
    bool ok = true;
    for (std::size_t x : sample) {
      if (h[x] != truth[x]) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(j);
  }
  return out;
}

nlohmann::json instance_to_json(const Instance& instance) {
  nlohmann::json doc;
  doc["format"] = kFormatVersion;
  doc["domain_size"] = instance.domain().size;
  nlohmann::json hyps = nlohmann::json::array();
  for (const Hypothesis& h : instance.hypotheses()) {
    nlohmann::json labels = nlohmann::json::array();
    for (std::uint8_t v : h.labels()) labels.push_back(static_cast<int>(v));
    hyps.push_back(std::move(labels));
  }
  doc["hypotheses"] = std::move(hyps);
  nlohmann::json agents = nlohmann::json::array();
  for (const AgentSpec& a : instance.agents()) {
    agents.push_back({{"distribution", a.distribution}, {"cost", a.cost}});
  }
  doc["agents"] = std::move(agents);
  doc["epsilon"] = instance.epsilon();
  doc["delta"] = instance.delta();
  return doc;
}

Instance instance_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("instance document must be an object");
  if (doc.contains("format")) {
    if (field<int>(doc, "format") != kFormatVersion) {
      throw ParseError("field 'format': unsupported version");
    }
  }
  const auto domain_size = field<std::size_t>(doc, "domain_size");
  const auto raw_hyps = field<std::vector<std::vector<int>>>(doc, "hypotheses");
  std::vector<Hypothesis> hyps;
  hyps.reserve(raw_hyps.size());
  for (std::size_t j = 0; j < raw_hyps.size(); ++j) {
    std::vector<std::uint8_t> labels;
    for (int v : raw_hyps[j]) {
      if (v != 0 && v != 1) {
        throw ParseError("field 'hypotheses[" + std::to_string(j) +
                         "]': labels must be 0 or 1");
      }
      labels.push_back(static_cast<std::uint8_t>(v));
    }
    hyps.emplace_back(std::move(labels));
  }
  if (!doc.contains("agents") || !doc.at("agents").is_array()) {
    throw ParseError("missing or non-array field 'agents'");
  }
  std::vector<AgentSpec> agents;
  for (std::size_t i = 0; i < doc.at("agents").size(); ++i) {
    const nlohmann::json& a = doc.at("agents")[i];
    AgentSpec spec;
    try {
      spec.distribution = field<std::vector<double>>(a, "distribution");
      spec.cost = field<double>(a, "cost");
    } catch (const ParseError& e) {
      throw ParseError("agents[" + std::to_string(i) + "]: " + e.what());
    }
    // Renormalize only what is already within tolerance; anything further
    // off is rejected by the Instance constructor. Sums that are off by
    // rounding noise alone are kept verbatim so save/load is the identity.
    const double sum = std::accumulate(spec.distribution.begin(),
                                       spec.distribution.end(), 0.0);
    const double drift = std::abs(sum - 1.0);
    if (drift > 1e-12 && drift <= kDistributionTolerance) {
      for (double& p : spec.distribution) p /= sum;
    }
    agents.push_back(std::move(spec));
  }
  return Instance(domain_size, HypothesisClass(std::move(hyps)),
                  std::move(agents), field<double>(doc, "epsilon"),
                  field<double>(doc, "delta"));
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return instance_from_json(doc);
}

void save_instance(const Instance& instance,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  out << instance_to_json(instance).dump(2) << "\n";
}

}  // namespace cpac
