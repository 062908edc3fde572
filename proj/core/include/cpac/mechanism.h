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

// Payment mechanisms on top of the planner's allocation.
//
// Agents report distributions, the planner computes m from the reports, and
// agent i receives p_i on top of its learning utility. Under
// pay-what-you-contribute (PWYC), p_i = c_i m_i + C_i refunds the sample cost
// exactly, so a truthful agent ends at 1 + C_i, the best it can do.

#ifndef CPAC_MECHANISM_H_
#define CPAC_MECHANISM_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cpac/instance.h"

namespace cpac {

enum class PaymentKind { kPwyc, kVcg, kTable };

std::string to_string(PaymentKind kind);

struct PaymentRule {
  PaymentKind kind = PaymentKind::kPwyc;
  // PWYC: p_i = reimbursement * c_i m_i + constants[i]. A reimbursement of 1
  // is the mechanism proper; anything else is a deliberately broken variant.
  std::vector<double> constants;
  double reimbursement = 1.0;
  // VCG: q_i.
  std::vector<double> pivot_terms;
  // Table: payment vector for each contribution vector in the domain.
  std::map<ContributionVector, std::vector<double>> table;

  static PaymentRule pwyc(std::vector<double> constants,
                          double reimbursement = 1.0);
  static PaymentRule vcg(std::vector<double> pivot_terms);
  static PaymentRule from_table(
      std::map<ContributionVector, std::vector<double>> table);

  // Payments at allocation m. Throws InvalidInputError if m lies outside a
  // table's domain.
  std::vector<double> payments(const Instance& instance,
                               const ContributionVector& m) const;
};

// c_i m_i + C_i.
std::vector<double> pwyc_payment(const ContributionVector& m,
                                 std::span<const double> costs,
                                 std::span<const double> constants);

// k - 1 - sum_{j != i} c_j m_j + q_i; empty pivot_terms means all zero.
std::vector<double> vcg_payment(const Instance& instance,
                                const ContributionVector& m_opt,
                                std::span<const double> pivot_terms = {});

// q_i = OPT(without agent i) - (k - 1), which makes p_i the externality
// agent i imposes on the others. Uses the exact optimizer, so desk-scale
// only.
std::vector<double> clarke_pivots(const Instance& instance);

struct AuditReport {
  std::size_t agent = 0;
  ContributionVector truthful_allocation;
  double truthful_utility = 0.0;
  double best_misreport_utility = 0.0;
  std::optional<std::vector<double>> misreport;
  std::optional<ContributionVector> misreport_allocation;
  std::size_t misreports_checked = 0;
  bool strategyproof = true;
};

// Misreports move `grid_step` of the agent's true mass from point a to point
// b, for every ordered pair with enough mass at a. Allocations come from the
// planner on the reported profile; utility is always scored on the true
// distribution.
AuditReport strategyproofness_audit(const Instance& instance,
                                    double grid_step, std::size_t agent,
                                    const PaymentRule& payment,
                                    std::size_t jobs = 1);

struct UniquenessEdge {
  std::size_t agent = 0;
  ContributionVector m;
  ContributionVector m_prime;
  double slack = 0.0;        // f_i(m) - c_i m_i
  double slack_prime = 0.0;  // f_i(m') - c_i m'_i
};

struct UniquenessReport {
  bool unique = true;
  // C_i when unique.
  std::vector<double> constants;
  std::optional<UniquenessEdge> witness;
};

// True iff every f_i(m) - c_i m_i is constant over the table's domain (within
// 1e-9). The domain must be connected under unit L1 steps; a disconnected one
// raises ValidationError.
UniquenessReport check_pwyc_uniqueness(const PaymentRule& table_rule,
                                       std::span<const double> costs);

// {"costs": [...], "entries": [{"m": [...], "payments": [...]}, ...]}
struct PaymentTable {
  std::vector<double> costs;
  PaymentRule rule;
};
PaymentTable payment_table_from_json(const nlohmann::json& doc);
nlohmann::json payment_table_to_json(const PaymentTable& table);
PaymentTable load_payment_table(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Local obliviousness witness for two agents.

struct BoundCheck {
  std::string name;  // "lhs <= rhs" in words
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

struct BindingCheck {
  std::string name;
  double value = 0.0;  // m_1 p + m_2 q
  double alpha = 0.0;
  double relative_error = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

struct WitnessFeasibility {
  std::string profile;  // which distribution pair
  std::string vector_name;
  ContributionVector m;
  std::optional<double> exact_worst_failure;
  std::optional<bool> exact_feasible;
  std::optional<double> mc_worst_estimate;
  std::optional<double> mc_standard_error;
  std::optional<bool> mc_feasible;  // estimate <= delta + 4 standard errors
};

struct ObliviousnessWitness {
  std::size_t num_points = 0;  // n = H - 1
  double alpha = 0.0;          // ln(H / delta)
  double epsilon = 0.0;
  std::vector<double> d1, d2, d1_prime, d2_prime;
  std::vector<BoundCheck> box_checks;
  std::vector<BindingCheck> binding_checks;
  std::vector<WitnessFeasibility> feasibility;
  bool boxes_ok = false;
  bool binding_ok = false;
  bool feasibility_ok = false;

  // Instance over the singleton-plus-empty class for a distribution pair.
  Instance instance(const std::vector<double>& a,
                    const std::vector<double>& b, double delta) const;
};

struct WitnessOptions {
  bool exact = true;
  std::size_t mc_trials = 100000;  // 0 skips Monte Carlo
  // Monte Carlo normally covers m and m - 1 only.
  bool mc_on_neighbor = false;
  std::uint64_t seed = 42;
};

// Smallest admissible per-agent count, 2 H log2 H.
double witness_threshold(std::size_t num_hypotheses);

ObliviousnessWitness obliviousness_witness(const ContributionVector& m,
                                           const ContributionVector& m_prime,
                                           std::size_t num_hypotheses,
                                           double delta,
                                           const WitnessOptions& options = {});

}  // namespace cpac

#endif  // CPAC_MECHANISM_H_
