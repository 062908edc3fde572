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

#include "cpac/mechanism.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <set>
#include <thread>

#include "cpac/errors.h"
#include "cpac/exact_opt.h"
#include "cpac/feasibility.h"
#include "cpac/planner.h"

namespace cpac {

std::string to_string(PaymentKind kind) {
  switch (kind) {
    case PaymentKind::kPwyc:
      return "pwyc";
    case PaymentKind::kVcg:
      return "vcg";
    case PaymentKind::kTable:
      return "table";
  }
  return "unknown";
}

PaymentRule PaymentRule::pwyc(std::vector<double> constants,
                              double reimbursement) {
  PaymentRule rule;
  rule.kind = PaymentKind::kPwyc;
  rule.constants = std::move(constants);
  rule.reimbursement = reimbursement;
  return rule;
}

PaymentRule PaymentRule::vcg(std::vector<double> pivot_terms) {
  PaymentRule rule;
  rule.kind = PaymentKind::kVcg;
  rule.pivot_terms = std::move(pivot_terms);
  return rule;
}

PaymentRule PaymentRule::from_table(
    std::map<ContributionVector, std::vector<double>> table) {
  PaymentRule rule;
  rule.kind = PaymentKind::kTable;
  rule.table = std::move(table);
  return rule;
}

std::vector<double> PaymentRule::payments(const Instance& instance,
                                          const ContributionVector& m) const {
  instance.check_contribution(m);
  const std::size_t k = instance.num_agents();
  switch (kind) {
    case PaymentKind::kPwyc: {
      std::vector<double> c = constants;
      if (c.empty()) c.assign(k, 0.0);
      std::vector<double> scaled = instance.costs();
      for (double& v : scaled) v *= reimbursement;
      return pwyc_payment(m, scaled, c);
    }
    case PaymentKind::kVcg:
      return vcg_payment(instance, m, pivot_terms);
    case PaymentKind::kTable: {
      const auto it = table.find(m);
      if (it == table.end()) {
        throw InvalidInputError("allocation " + m.to_string() +
                                " is outside the payment table");
      }
      if (it->second.size() != k) {
        throw InvalidInputError("payment table entry has wrong width");
      }
      return it->second;
    }
  }
  return {};
}

std::vector<double> pwyc_payment(const ContributionVector& m,
                                 std::span<const double> costs,
                                 std::span<const double> constants) {
  if (costs.size() != m.size() || constants.size() != m.size()) {
    throw InvalidInputError("pwyc_payment: dimension mismatch");
  }
  std::vector<double> p(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    p[i] = costs[i] * static_cast<double>(m[i]) + constants[i];
  }
  return p;
}

std::vector<double> vcg_payment(const Instance& instance,
                                const ContributionVector& m_opt,
                                std::span<const double> pivot_terms) {
  instance.check_contribution(m_opt);
  const std::size_t k = instance.num_agents();
  if (!pivot_terms.empty() && pivot_terms.size() != k) {
    throw InvalidInputError("vcg_payment: pivot_terms length mismatch");
  }
  const auto costs = instance.costs();
  const double total = m_opt.cost(costs);
  std::vector<double> p(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double others = total - costs[i] * static_cast<double>(m_opt[i]);
    p[i] = static_cast<double>(k) - 1.0 - others +
           (pivot_terms.empty() ? 0.0 : pivot_terms[i]);
  }
  return p;
}

std::vector<double> clarke_pivots(const Instance& instance) {
  const std::size_t k = instance.num_agents();
  std::vector<double> q(k, 0.0);
  if (k == 1) return q;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<AgentSpec> rest;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) rest.push_back(instance.agent(j));
    }
    const Instance without = instance.with_agents(std::move(rest));
    const auto oracle = make_oracle(without, Objective::kPac);
    const double opt = exact_min_cost_search(*oracle).cost;
    q[i] = opt - static_cast<double>(k - 1);
  }
  return q;
}

// ---------------------------------------------------------------------------
// Audit

AuditReport strategyproofness_audit(const Instance& instance,
                                    double grid_step, std::size_t agent,
                                    const PaymentRule& payment,
                                    std::size_t jobs) {
  if (!(grid_step > 0.0 && grid_step < 1.0)) {
    throw InvalidInputError("grid step must lie in (0, 1)");
  }
  if (agent >= instance.num_agents()) {
    throw InvalidInputError("agent index out of range");
  }
  const PacOracle truth(instance);
  const double cost = instance.agent(agent).cost;
  auto true_utility = [&](const ContributionVector& m) {
    const double reward = truth.agent_satisfied(m, agent) ? 1.0 : 0.0;
    return reward - cost * static_cast<double>(m[agent]) +
           payment.payments(instance, m)[agent];
  };

  AuditReport report;
  report.agent = agent;
  report.truthful_allocation = solve_pac_allocation(instance);
  report.truthful_utility = true_utility(report.truthful_allocation);
  report.best_misreport_utility = report.truthful_utility;

  const std::vector<double>& base = instance.agent(agent).distribution;
  const std::size_t n = base.size();
  std::vector<std::vector<double>> misreports;
  for (std::size_t a = 0; a < n; ++a) {
    if (base[a] < grid_step - kMassTolerance) continue;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      std::vector<double> d = base;
      d[a] = std::max(0.0, d[a] - grid_step);
      d[b] += grid_step;
      misreports.push_back(std::move(d));
    }
  }

  struct Outcome {
    ContributionVector m;
    double utility = 0.0;
  };
  std::vector<Outcome> outcomes(misreports.size());
  auto evaluate = [&](std::size_t idx) {
    std::vector<AgentSpec> reported = instance.agents();
    reported[agent].distribution = misreports[idx];
    const ContributionVector m =
        solve_pac_allocation(instance.with_agents(std::move(reported)));
    outcomes[idx] = {m, true_utility(m)};
  };
  const std::size_t workers =
      std::max<std::size_t>(1, std::min(jobs, misreports.size()));
  if (workers == 1) {
    for (std::size_t idx = 0; idx < misreports.size(); ++idx) evaluate(idx);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        for (std::size_t idx = w; idx < misreports.size(); idx += workers) {
          evaluate(idx);
        }
      });
    }
    for (auto& t : threads) t.join();
  }

  report.misreports_checked = misreports.size();
  for (std::size_t idx = 0; idx < outcomes.size(); ++idx) {
    if (!report.misreport.has_value() ||
        outcomes[idx].utility > report.best_misreport_utility) {
      report.best_misreport_utility = outcomes[idx].utility;
      report.misreport = misreports[idx];
      report.misreport_allocation = outcomes[idx].m;
    }
  }
  report.strategyproof =
      report.truthful_utility >= report.best_misreport_utility - 1e-9;
  return report;
}

// ---------------------------------------------------------------------------
// Uniqueness

UniquenessReport check_pwyc_uniqueness(const PaymentRule& table_rule,
                                       std::span<const double> costs) {
  if (table_rule.kind != PaymentKind::kTable) {
    throw InvalidInputError("uniqueness check needs a table payment rule");
  }
  const auto& table = table_rule.table;
  if (table.empty()) throw InvalidInputError("payment table is empty");
  const std::size_t k = costs.size();
  for (const auto& [m, f] : table) {
    if (m.size() != k || f.size() != k) {
      throw InvalidInputError("payment table entry " + m.to_string() +
                              " does not have " + std::to_string(k) +
                              " agents");
    }
  }

  // Connectivity under unit L1 steps.
  std::set<ContributionVector> reached = {table.begin()->first};
  std::deque<ContributionVector> queue = {table.begin()->first};
  while (!queue.empty()) {
    const ContributionVector m = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < k; ++j) {
      for (int step : {-1, 1}) {
        if (m[j] + step < 0) continue;
        ContributionVector next = m.with(j, m[j] + step);
        if (table.contains(next) && reached.insert(next).second) {
          queue.push_back(std::move(next));
        }
      }
    }
  }
  if (reached.size() != table.size()) {
    throw ValidationError("payment table domain is not connected under unit "
                          "L1 steps");
  }

  auto slack = [&](const ContributionVector& m, std::size_t i) {
    return table.at(m)[i] - costs[i] * static_cast<double>(m[i]);
  };

  UniquenessReport report;
  for (const auto& [m, f] : table) {
    for (std::size_t j = 0; j < k; ++j) {
      const ContributionVector next = m.with(j, m[j] + 1);
      if (!table.contains(next)) continue;
      for (std::size_t i = 0; i < k; ++i) {
        const double s = slack(m, i);
        const double s_next = slack(next, i);
        if (std::abs(s - s_next) > 1e-9) {
          report.unique = false;
          report.witness = UniquenessEdge{i, m, next, s, s_next};
          return report;
        }
      }
    }
  }
  const ContributionVector& first = table.begin()->first;
  for (std::size_t i = 0; i < k; ++i) report.constants.push_back(slack(first, i));
  return report;
}

PaymentTable payment_table_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("payment table must be an object");
  if (!doc.contains("costs") || !doc["costs"].is_array()) {
    throw ParseError("payment table field 'costs' missing or not an array");
  }
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    throw ParseError("payment table field 'entries' missing or not an array");
  }
  PaymentTable out;
  try {
    out.costs = doc["costs"].get<std::vector<double>>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError("payment table field 'costs' must hold numbers");
  }
  std::map<ContributionVector, std::vector<double>> table;
  for (std::size_t e = 0; e < doc["entries"].size(); ++e) {
    const auto& entry = doc["entries"][e];
    const std::string where = "entries[" + std::to_string(e) + "]";
    if (!entry.is_object() || !entry.contains("m") ||
        !entry.contains("payments")) {
      throw ParseError(where + " needs fields 'm' and 'payments'");
    }
    std::vector<std::int64_t> m;
    std::vector<double> p;
    try {
      m = entry["m"].get<std::vector<std::int64_t>>();
      p = entry["payments"].get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      throw ParseError(where + " has non-numeric 'm' or 'payments'");
    }
    ContributionVector key;
    try {
      key = ContributionVector(std::move(m));
    } catch (const Error& err) {
      throw ValidationError(where + ": " + err.what());
    }
    if (!table.emplace(std::move(key), std::move(p)).second) {
      throw ValidationError(where + " repeats a contribution vector");
    }
  }
  out.rule = PaymentRule::from_table(std::move(table));
  return out;
}

nlohmann::json payment_table_to_json(const PaymentTable& table) {
  nlohmann::json doc;
  doc["costs"] = table.costs;
  doc["entries"] = nlohmann::json::array();
  for (const auto& [m, p] : table.rule.table) {
    doc["entries"].push_back({{"m", m.counts()}, {"payments", p}});
  }
  return doc;
}

PaymentTable load_payment_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open payment table " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError("payment table " + path.string() +
                     " is not valid JSON: " + err.what());
  }
  return payment_table_from_json(doc);
}

// ---------------------------------------------------------------------------
// Obliviousness witness

double witness_threshold(std::size_t num_hypotheses) {
  const double h = static_cast<double>(num_hypotheses);
  return 2.0 * h * std::log2(h);
}

Instance ObliviousnessWitness::instance(const std::vector<double>& a,
                                        const std::vector<double>& b,
                                        double delta) const {
  std::vector<Hypothesis> hs;
  hs.emplace_back(std::vector<std::uint8_t>(num_points, 0));
  for (std::size_t x = 0; x < num_points; ++x) {
    std::vector<std::uint8_t> labels(num_points, 0);
    labels[x] = 1;
    hs.emplace_back(std::move(labels));
  }
  return Instance(num_points, HypothesisClass(std::move(hs)),
                  {{a, 1.0}, {b, 1.0}}, epsilon, delta);
}

namespace {

// Two binding masses at points 0 and 1, the rest spread evenly.
std::vector<double> spread(double first, double second, std::size_t n) {
  std::vector<double> d(n, (1.0 - first - second) / static_cast<double>(n - 2));
  d[0] = first;
  d[1] = second;
  return d;
}

void add_box_checks(std::vector<BoundCheck>& out, const std::string& label,
                    const std::vector<double>& p, const std::vector<double>& q,
                    std::size_t n) {
  const double half = 1.0 / (2.0 * static_cast<double>(n));
  const double full = 1.0 / static_cast<double>(n);
  auto le = [&](const std::string& name, double lhs, double rhs) {
    out.push_back({label + ": " + name, lhs, rhs, lhs <= rhs});
  };
  auto lt = [&](const std::string& name, double lhs, double rhs) {
    out.push_back({label + ": " + name, lhs, rhs, lhs < rhs});
  };
  lt("0 < p1", 0.0, p[0]);
  le("p1 <= p2", p[0], p[1]);
  le("p2 <= 1/(2n)", p[1], half);
  lt("0 < q2", 0.0, q[1]);
  le("q2 <= q1", q[1], q[0]);
  le("q1 <= 1/(2n)", q[0], half);
  le("p1 + p2 <= 1/n", p[0] + p[1], full);
  le("q1 + q2 <= 1/n", q[0] + q[1], full);
  le("1/n <= p3", full, p[2]);
  le("1/n <= q3", full, q[2]);
}

void add_binding_checks(std::vector<BindingCheck>& out,
                        const std::string& label, const std::vector<double>& p,
                        const std::vector<double>& q,
                        const ContributionVector& m, double alpha) {
  const double tol =
      1.0 / static_cast<double>(std::min(m[0], m[1]));
  for (std::size_t point = 0; point < 2; ++point) {
    const double value = static_cast<double>(m[0]) * p[point] +
                         static_cast<double>(m[1]) * q[point];
    const double rel = std::abs(value - alpha) / alpha;
    out.push_back({label + ": point " + std::to_string(point + 1), value,
                   alpha, rel, tol, rel <= tol});
  }
}

}  // namespace

ObliviousnessWitness obliviousness_witness(const ContributionVector& m,
                                           const ContributionVector& m_prime,
                                           std::size_t num_hypotheses,
                                           double delta,
                                           const WitnessOptions& options) {
  if (m.size() != 2 || m_prime.size() != 2) {
    throw InvalidInputError("obliviousness witness needs two agents");
  }
  if (num_hypotheses < 18) {
    throw InvalidInputError("obliviousness witness needs H >= 18, got " +
                            std::to_string(num_hypotheses));
  }
  if (!(delta > 0.0 && delta <= 0.5)) {
    throw InvalidInputError("obliviousness witness needs delta in (0, 0.5]");
  }
  const double threshold = witness_threshold(num_hypotheses);
  for (std::size_t i = 0; i < 2; ++i) {
    if (static_cast<double>(m[i]) < threshold) {
      throw InvalidInputError("m_" + std::to_string(i + 1) + " = " +
                              std::to_string(m[i]) + " is below 2 H log2 H = " +
                              std::to_string(threshold));
    }
  }
  if (std::abs(m[0] - m_prime[0]) + std::abs(m[1] - m_prime[1]) != 1) {
    throw InvalidInputError("m' must be a unit L1 neighbor of m");
  }

  ObliviousnessWitness w;
  const std::size_t n = num_hypotheses - 1;
  w.num_points = n;
  w.alpha = std::log(static_cast<double>(num_hypotheses) / delta);
  const double m1 = static_cast<double>(m[0]);
  const double m2 = static_cast<double>(m[1]);
  const double m1p = static_cast<double>(m_prime[0]);
  const double m2p = static_cast<double>(m_prime[1]);
  const double a = w.alpha;

  const double p1 = a / (m1 * m2);
  const double q1 = (1.0 - 1.0 / m2) * a / m2;
  const double p2 = (1.0 - 1.0 / m1) * a / m1;
  const double q2 = a / (m1 * m2);
  w.d1 = spread(p1, p2, n);
  w.d2 = spread(q1, q2, n);
  // D1' keeps D2 and solves m'_1 p' + m'_2 q = alpha; D2' symmetrically.
  w.d1_prime = spread((a - m2p * q1) / m1p, (a - m2p * q2) / m1p, n);
  w.d2_prime = spread((a - m1p * p1) / m2p, (a - m1p * p2) / m2p, n);

  // Half the smaller binding mass: the binding points are bad for at least
  // one agent in every profile, the tiny masses are bad for nobody.
  w.epsilon = 0.5 * std::min(std::max(p1, q1), std::max(p2, q2));

  add_box_checks(w.box_checks, "D1,D2", w.d1, w.d2, n);
  add_box_checks(w.box_checks, "D1',D2", w.d1_prime, w.d2, n);
  add_box_checks(w.box_checks, "D1,D2'", w.d1, w.d2_prime, n);
  w.boxes_ok = std::all_of(w.box_checks.begin(), w.box_checks.end(),
                           [](const BoundCheck& c) { return c.ok; });

  add_binding_checks(w.binding_checks, "D1,D2 at m", w.d1, w.d2, m, a);
  add_binding_checks(w.binding_checks, "D1',D2 at m'", w.d1_prime, w.d2,
                     m_prime, a);
  add_binding_checks(w.binding_checks, "D1,D2' at m'", w.d1, w.d2_prime,
                     m_prime, a);
  w.binding_ok = std::all_of(w.binding_checks.begin(), w.binding_checks.end(),
                             [](const BindingCheck& c) { return c.ok; });

  const ContributionVector reduced({m[0] - 1, m[1] - 1});
  struct Profile {
    std::string name;
    const std::vector<double>* a;
    const std::vector<double>* b;
  };
  const Profile profiles[] = {{"D1,D2", &w.d1, &w.d2},
                              {"D1',D2", &w.d1_prime, &w.d2},
                              {"D1,D2'", &w.d1, &w.d2_prime}};
  const std::pair<std::string, ContributionVector> vectors[] = {
      {"m", m}, {"m-1", reduced}, {"m'", m_prime}};
  OracleOptions oracle_options = OracleOptions::from_env();
  oracle_options.max_bad_set =
      std::max(oracle_options.max_bad_set, num_hypotheses);
  w.feasibility_ok = true;
  for (const Profile& profile : profiles) {
    const Instance inst = w.instance(*profile.a, *profile.b, delta);
    std::optional<PacOracle> oracle;
    if (options.exact) oracle.emplace(inst, oracle_options);
    for (const auto& [name, vec] : vectors) {
      WitnessFeasibility f{profile.name, name, vec, {}, {}, {}, {}, {}};
      if (oracle.has_value()) {
        double worst = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
          worst = std::max(worst, oracle->worst_failure(vec, i).value);
        }
        f.exact_worst_failure = worst;
        f.exact_feasible = oracle->feasible(vec);
        w.feasibility_ok = w.feasibility_ok && *f.exact_feasible;
      }
      if (options.mc_trials > 0 && (name != "m'" || options.mc_on_neighbor)) {
        const auto estimates =
            monte_carlo_pac_failure_all(inst, vec, options.mc_trials,
                                        options.seed);
        bool ok = true;
        const MonteCarloEstimate* worst = &estimates.front();
        for (const MonteCarloEstimate& e : estimates) {
          ok = ok && e.estimate <= delta + 4.0 * e.standard_error;
          if (e.estimate > worst->estimate) worst = &e;
        }
        f.mc_worst_estimate = worst->estimate;
        f.mc_standard_error = worst->standard_error;
        f.mc_feasible = ok;
        w.feasibility_ok = w.feasibility_ok && ok;
      }
      w.feasibility.push_back(std::move(f));
    }
  }
  return w;
}

}  // namespace cpac
