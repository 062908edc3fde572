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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cpac/errors.h"
#include "cpac/exact_opt.h"
#include "cpac/feasibility.h"
#include "cpac/game.h"
#include "cpac/instance.h"
#include "cpac/mechanism.h"
#include "cpac/planner.h"
#include "cpac/reduction.h"
#include "cpac/verify/acceptance.h"

#ifndef CPAC_VERSION
#define CPAC_VERSION "unknown"
#endif

namespace cpac::cli {

namespace {

using Json = nlohmann::ordered_json;

Json to_json(const ContributionVector& m) { return Json(m.counts()); }

Json to_json(const std::vector<ContributionVector>& ms) {
  Json a = Json::array();
  for (const auto& m : ms) a.push_back(to_json(m));
  return a;
}

template <typename T>
Json to_json(const std::optional<T>& v) {
  if (!v.has_value()) return nullptr;
  if constexpr (std::is_same_v<T, ContributionVector>) {
    return to_json(*v);
  } else {
    return Json(*v);
  }
}

ContributionVector parse_vector(const std::string& text) {
  std::vector<std::int64_t> counts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      counts.push_back(v);
    } catch (const std::logic_error&) {
      throw InvalidInputError("bad contribution vector '" + text + "'");
    }
  }
  if (counts.empty()) {
    throw InvalidInputError("empty contribution vector");
  }
  return ContributionVector(std::move(counts));
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw InvalidInputError("bad number list '" + text + "'");
    }
  }
  return values;
}

Json instance_summary(const Instance& inst) {
  Json j;
  j["domain_size"] = inst.domain().size;
  j["num_hypotheses"] = inst.num_hypotheses();
  j["num_agents"] = inst.num_agents();
  j["epsilon"] = inst.epsilon();
  j["delta"] = inst.delta();
  j["costs"] = inst.costs();
  return j;
}

Json game_outcome_json(const ContributionGame& game, const GameOutcome& out) {
  Json j;
  j["strategy_box"] = game.strategy_box();
  j["pure_ne"] = to_json(out.pure_ne);
  j["num_pure_ne"] = out.pure_ne.size();
  j["best_ne"] = to_json(out.best_ne);
  j["best_ne_cost"] = to_json(out.best_ne_cost);
  j["optimum"] = to_json(out.optimum);
  j["opt_cost"] = to_json(out.opt_cost);
  j["pos"] = to_json(out.pos);
  j["status"] = out.status;
  return j;
}

Json audit_json(const AuditReport& r) {
  Json j;
  j["agent"] = r.agent;
  j["truthful_allocation"] = to_json(r.truthful_allocation);
  j["truthful_utility"] = r.truthful_utility;
  j["best_misreport_utility"] = r.best_misreport_utility;
  j["misreport"] = r.misreport.has_value() ? Json(*r.misreport) : Json(nullptr);
  j["misreport_allocation"] = to_json(r.misreport_allocation);
  j["misreports_checked"] = r.misreports_checked;
  j["strategyproof"] = r.strategyproof;
  return j;
}

Json witness_json(const ObliviousnessWitness& w) {
  Json j;
  j["num_points"] = w.num_points;
  j["alpha"] = w.alpha;
  j["epsilon"] = w.epsilon;
  j["d1"] = w.d1;
  j["d2"] = w.d2;
  j["d1_prime"] = w.d1_prime;
  j["d2_prime"] = w.d2_prime;
  Json boxes = Json::array();
  for (const BoundCheck& c : w.box_checks) {
    boxes.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs},
                     {"ok", c.ok}});
  }
  j["box_checks"] = boxes;
  Json binding = Json::array();
  for (const BindingCheck& c : w.binding_checks) {
    binding.push_back({{"name", c.name},
                       {"value", c.value},
                       {"alpha", c.alpha},
                       {"relative_error", c.relative_error},
                       {"tolerance", c.tolerance},
                       {"ok", c.ok}});
  }
  j["binding_checks"] = binding;
  Json feas = Json::array();
  for (const WitnessFeasibility& f : w.feasibility) {
    feas.push_back({{"profile", f.profile},
                    {"vector", f.vector_name},
                    {"m", to_json(f.m)},
                    {"exact_worst_failure", to_json(f.exact_worst_failure)},
                    {"exact_feasible", to_json(f.exact_feasible)},
                    {"mc_worst_estimate", to_json(f.mc_worst_estimate)},
                    {"mc_standard_error", to_json(f.mc_standard_error)},
                    {"mc_feasible", to_json(f.mc_feasible)}});
  }
  j["feasibility"] = feas;
  j["boxes_ok"] = w.boxes_ok;
  j["binding_ok"] = w.binding_ok;
  j["feasibility_ok"] = w.feasibility_ok;
  return j;
}

// Settings shared by all subcommands.
struct Globals {
  std::uint64_t seed = 42;
  std::size_t jobs = 1;
};

// Each handler fills `params` and returns the result document.
using Handler = std::function<Json(Json& params)>;

Objective parse_objective(const std::string& name) {
  return objective_from_string(name);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Collaborative PAC learning toolkit", "cpac"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", CPAC_VERSION);
  Globals globals;
  app.add_option("--seed", globals.seed, "Seed for stochastic components")
      ->capture_default_str();
  app.add_option("--jobs", globals.jobs, "Worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::string command;
  Handler handler;
  auto on = [&](CLI::App* sub, std::string name, Handler h) {
    sub->callback([&command, &handler, name = std::move(name),
                   h = std::move(h)] {
      command = name;
      handler = h;
    });
  };

  // plan ------------------------------------------------------------------
  std::string instance_path, objective_name = "pac";
  auto* plan = app.add_subcommand("plan", "LP planner allocation");
  plan->add_option("--instance", instance_path)->required();
  plan->add_option("--objective", objective_name)
      ->check(CLI::IsMember({"pac", "expected"}));
  bool pipeline = false;
  std::optional<double> gamma, delta_prime, delta_double_prime, scale_d;
  plan->add_flag("--pipeline", pipeline, "Plan on a gamma-cover and scale up");
  plan->add_option("--gamma", gamma);
  plan->add_option("--delta-prime", delta_prime);
  plan->add_option("--delta-double-prime", delta_double_prime);
  plan->add_option("--scale-d", scale_d);
  on(plan, "plan", [&](Json& params) {
    params["instance"] = instance_path;
    params["objective"] = objective_name;
    params["pipeline"] = pipeline;
    const Instance inst = load_instance(instance_path);
    const Objective objective = parse_objective(objective_name);
    Json r;
    r["instance"] = instance_summary(inst);
    if (pipeline) {
      if (objective != Objective::kPac) {
        throw InvalidInputError("--pipeline supports the pac objective only");
      }
      const PipelineResult p = infinite_class_pipeline(
          inst, {gamma, delta_prime, delta_double_prime, scale_d});
      r["m"] = to_json(p.m);
      r["cost"] = p.m.cost(inst.costs());
      r["base"] = to_json(p.base);
      r["cover_size"] = p.cover.size();
      r["gamma"] = p.gamma;
      r["delta_prime"] = p.delta_prime;
      r["delta_double_prime"] = p.delta_double_prime;
      r["scale_d"] = p.scale_d;
      r["multiplier"] = p.multiplier;
      return r;
    }
    const PlanResult p =
        objective == Objective::kPac ? plan_pac(inst) : plan_expected(inst);
    r["m"] = to_json(p.m);
    r["cost"] = p.rounded_cost;
    r["lp_cost"] = p.lp_cost;
    r["lp_status"] = to_string(p.lp.status);
    r["lp_x"] = p.lp.x;
    r["lp_dual"] = p.lp.dual;
    r["lp_rows"] = p.rows;
    r["lp_iterations"] = p.lp.iterations;
    return r;
  });

  // exact -----------------------------------------------------------------
  auto* exact = app.add_subcommand("exact", "Exact minimum-cost allocation");
  exact->add_option("--instance", instance_path)->required();
  exact->add_option("--objective", objective_name)
      ->check(CLI::IsMember({"pac", "expected"}));
  std::optional<std::int64_t> cap;
  exact->add_option("--cap", cap, "Per-agent search bound")
      ->check(CLI::NonNegativeNumber);
  on(exact, "exact", [&](Json& params) {
    params["instance"] = instance_path;
    params["objective"] = objective_name;
    params["cap"] = to_json(cap);
    const Instance inst = load_instance(instance_path);
    const auto oracle = make_oracle(inst, parse_objective(objective_name));
    ExactOptions options;
    options.cap = cap;
    const ExactResult e = exact_min_cost_search(*oracle, options);
    Json r;
    r["instance"] = instance_summary(inst);
    r["m"] = to_json(e.m);
    r["cost"] = e.cost;
    r["cap"] = e.cap;
    r["evaluated"] = e.evaluated;
    return r;
  });

  // ratio -----------------------------------------------------------------
  auto* ratio = app.add_subcommand("ratio", "Planner cost against the optimum");
  ratio->add_option("--instance", instance_path)->required();
  ratio->add_option("--objective", objective_name)
      ->check(CLI::IsMember({"pac", "expected"}));
  on(ratio, "ratio", [&](Json& params) {
    params["instance"] = instance_path;
    params["objective"] = objective_name;
    const Instance inst = load_instance(instance_path);
    const Objective objective = parse_objective(objective_name);
    const RatioReport rep = approximation_ratio(inst, objective);
    Json r;
    r["instance"] = instance_summary(inst);
    r["planner"] = to_json(rep.planner);
    r["optimum"] = to_json(rep.optimum);
    r["planner_cost"] = rep.planner_cost;
    r["lp_cost"] = rep.lp_cost;
    r["optimal_cost"] = rep.optimal_cost;
    r["ratio"] = rep.ratio;
    r["lp_ratio"] = rep.lp_ratio;
    if (objective == Objective::kPac) {
      const double l = std::log(1.0 / inst.delta());
      r["lp_ratio_bound"] =
          (l + std::log(static_cast<double>(inst.num_hypotheses()))) / l;
    }
    return r;
  });

  // oracle ----------------------------------------------------------------
  auto* oracle_cmd = app.add_subcommand("oracle", "Evaluate a contribution vector");
  oracle_cmd->add_option("--instance", instance_path)->required();
  oracle_cmd->add_option("--objective", objective_name)
      ->check(CLI::IsMember({"pac", "expected"}));
  std::string m_text;
  oracle_cmd->add_option("--m", m_text, "Comma-separated counts")->required();
  std::size_t mc_trials = 0;
  oracle_cmd->add_option("--mc-trials", mc_trials,
                         "Monte Carlo trials (pac only; 0 skips)");
  on(oracle_cmd, "oracle", [&](Json& params) {
    params["instance"] = instance_path;
    params["objective"] = objective_name;
    params["m"] = m_text;
    params["mc_trials"] = mc_trials;
    const Instance inst = load_instance(instance_path);
    const ContributionVector m = parse_vector(m_text);
    inst.check_contribution(m);
    const Objective objective = parse_objective(objective_name);
    Json r;
    r["instance"] = instance_summary(inst);
    r["m"] = to_json(m);
    r["cost"] = m.cost(inst.costs());
    Json agents = Json::array();
    bool feasible = true;
    if (objective == Objective::kPac) {
      const PacOracle oracle(inst);
      std::vector<MonteCarloEstimate> mc;
      if (mc_trials > 0) {
        mc = monte_carlo_pac_failure_all(inst, m, mc_trials, globals.seed);
      }
      for (std::size_t a = 0; a < inst.num_agents(); ++a) {
        Json entry;
        entry["agent"] = a;
        std::vector<double> per_target;
        for (std::size_t t = 0; t < inst.num_hypotheses(); ++t) {
          per_target.push_back(oracle.failure(m, t, a).value);
        }
        const FailureProbability worst = oracle.worst_failure(m, a);
        entry["failure_by_target"] = per_target;
        entry["worst_failure"] = worst.value;
        entry["worst_target"] = worst.target;
        entry["satisfied"] = oracle.agent_satisfied(m, a);
        feasible = feasible && entry["satisfied"].get<bool>();
        if (!mc.empty()) {
          Json est = Json::array();
          for (std::size_t t = 0; t < inst.num_hypotheses(); ++t) {
            const MonteCarloEstimate& e = mc[t * inst.num_agents() + a];
            est.push_back({{"estimate", e.estimate},
                           {"standard_error", e.standard_error}});
          }
          entry["monte_carlo"] = est;
        }
        agents.push_back(entry);
      }
    } else {
      if (mc_trials > 0) {
        throw InvalidInputError("--mc-trials applies to the pac objective");
      }
      const ExpectedOracle oracle(inst);
      for (std::size_t a = 0; a < inst.num_agents(); ++a) {
        Json entry;
        entry["agent"] = a;
        std::vector<double> per_target;
        for (std::size_t t = 0; t < inst.num_hypotheses(); ++t) {
          per_target.push_back(oracle.error(m, t, a));
        }
        entry["error_by_target"] = per_target;
        entry["worst_error"] = oracle.worst_error(m, a);
        entry["satisfied"] = oracle.agent_satisfied(m, a);
        feasible = feasible && entry["satisfied"].get<bool>();
        agents.push_back(entry);
      }
    }
    r["agents"] = agents;
    r["feasible"] = feasible;
    return r;
  });

  // game ------------------------------------------------------------------
  auto* game = app.add_subcommand("game", "Contribution game equilibria");
  game->require_subcommand(1);
  auto game_options = [&] {
    GameOptions o = GameOptions::from_env();
    o.jobs = globals.jobs;
    return o;
  };
  double cost_value = 0.25;
  auto* game_nonexistence =
      game->add_subcommand("nonexistence", "Three-agent instance without NE");
  game_nonexistence->add_option("--cost", cost_value)->capture_default_str();
  std::string instance_out;
  game_nonexistence->add_option("--out", instance_out, "Save the instance here");
  on(game_nonexistence, "game nonexistence", [&](Json& params) {
    params["cost"] = cost_value;
    const Instance inst = nonexistence_instance(cost_value);
    if (!instance_out.empty()) save_instance(inst, instance_out);
    const ContributionGame g(inst, game_options());
    Json r = game_outcome_json(g, g.enumerate_pure_ne());
    r["instance"] = instance_summary(g.instance());
    return r;
  });

  auto* game_ne = game->add_subcommand("ne", "Enumerate pure equilibria");
  game_ne->add_option("--instance", instance_path)->required();
  on(game_ne, "game ne", [&](Json& params) {
    params["instance"] = instance_path;
    const ContributionGame g(load_instance(instance_path), game_options());
    Json r = game_outcome_json(g, g.price_of_stability());
    r["instance"] = instance_summary(g.instance());
    return r;
  });

  double epsilon = 0.05, delta = 0.5;
  std::optional<double> cost;
  auto* game_pos = game->add_subcommand(
      "pos", "Price of stability on the growing-gap instance");
  game_pos->add_option("--epsilon", epsilon)->capture_default_str();
  game_pos->add_option("--delta", delta)->capture_default_str();
  game_pos->add_option("--cost", cost);
  game_pos->add_option("--out", instance_out, "Save the instance here");
  on(game_pos, "game pos", [&](Json& params) {
    params["epsilon"] = epsilon;
    params["delta"] = delta;
    params["cost"] = to_json(cost);
    const Instance inst = pos_instance(epsilon, delta, cost);
    if (!instance_out.empty()) save_instance(inst, instance_out);
    GameOptions o = game_options();
    o.oracle.max_bad_set = std::max(o.oracle.max_bad_set, inst.num_hypotheses());
    const ContributionGame g(inst, o);
    Json r = game_outcome_json(g, g.price_of_stability());
    r["instance"] = instance_summary(inst);
    r["log_ratio"] =
        (std::log(1.0 / epsilon) + std::log(1.0 / delta)) / std::log(1.0 / delta);
    return r;
  });

  std::optional<double> ab_delta;
  double ab_epsilon = 0.1;
  auto* game_ab = game->add_subcommand("alice-bob", "Two-agent example");
  game_ab->add_option("--epsilon", ab_epsilon)->capture_default_str();
  game_ab->add_option("--delta", ab_delta,
                      "Defaults to 1 - (1 - 2 epsilon)^2");
  game_ab->add_option("--cost", cost);
  game_ab->add_option("--out", instance_out, "Save the instance here");
  on(game_ab, "game alice-bob", [&](Json& params) {
    const double d = ab_delta.value_or(alice_bob_delta(ab_epsilon));
    params["epsilon"] = ab_epsilon;
    params["delta"] = d;
    params["cost"] = to_json(cost);
    const Instance inst = alice_bob_instance(ab_epsilon, d, cost);
    if (!instance_out.empty()) save_instance(inst, instance_out);
    const ContributionGame g(inst, game_options());
    Json r = game_outcome_json(g, g.price_of_stability());
    r["instance"] = instance_summary(g.instance());
    return r;
  });

  std::string start_text;
  std::size_t max_sweeps = 1000;
  auto* game_dyn =
      game->add_subcommand("dynamics", "Round-robin best-response dynamics");
  game_dyn->add_option("--instance", instance_path)->required();
  game_dyn->add_option("--start", start_text)->required();
  game_dyn->add_option("--max-sweeps", max_sweeps)->capture_default_str();
  on(game_dyn, "game dynamics", [&](Json& params) {
    params["instance"] = instance_path;
    params["start"] = start_text;
    params["max_sweeps"] = max_sweeps;
    const ContributionGame g(load_instance(instance_path), game_options());
    const auto d = g.best_response_dynamics(parse_vector(start_text), max_sweeps);
    Json r;
    r["final_profile"] = to_json(d.final_profile);
    r["end"] = to_string(d.end);
    Json trace = Json::array();
    for (const BestResponseStep& s : d.trace) {
      trace.push_back(
          {{"agent", s.agent}, {"from", s.old_value}, {"to", s.new_value}});
    }
    r["trace"] = trace;
    return r;
  });

  // mech ------------------------------------------------------------------
  auto* mech = app.add_subcommand("mech", "Payment mechanisms");
  mech->require_subcommand(1);
  std::optional<std::size_t> agent;
  double grid = 0.05, reimbursement = 1.0;
  std::string rule_name = "pwyc", table_path, constants_text;
  bool clarke = false;
  auto* audit = mech->add_subcommand("audit", "Misreport grid audit");
  audit->add_option("--instance", instance_path)->required();
  audit->add_option("--agent", agent, "Defaults to every agent");
  audit->add_option("--grid", grid)->capture_default_str();
  audit->add_option("--rule", rule_name)
      ->check(CLI::IsMember({"pwyc", "vcg", "table"}))
      ->capture_default_str();
  audit->add_option("--reimbursement", reimbursement,
                    "PWYC multiplier on c_i m_i")
      ->capture_default_str();
  audit->add_option("--constants", constants_text, "PWYC constants C_i");
  audit->add_flag("--clarke", clarke, "VCG with Clarke pivot terms");
  audit->add_option("--table", table_path, "Payment table for --rule table");
  on(audit, "mech audit", [&](Json& params) {
    params["instance"] = instance_path;
    params["agent"] = to_json(agent);
    params["grid"] = grid;
    params["rule"] = rule_name;
    const Instance inst = load_instance(instance_path);
    const std::size_t k = inst.num_agents();
    PaymentRule rule;
    if (rule_name == "pwyc") {
      std::vector<double> c = constants_text.empty()
                                  ? std::vector<double>(k, 0.0)
                                  : parse_doubles(constants_text);
      if (c.size() != k) throw InvalidInputError("need one constant per agent");
      params["reimbursement"] = reimbursement;
      params["constants"] = c;
      rule = PaymentRule::pwyc(std::move(c), reimbursement);
    } else if (rule_name == "vcg") {
      params["clarke"] = clarke;
      rule = PaymentRule::vcg(clarke ? clarke_pivots(inst) : std::vector<double>{});
    } else {
      if (table_path.empty()) throw InvalidInputError("--rule table needs --table");
      params["table"] = table_path;
      rule = load_payment_table(table_path).rule;
    }
    Json reports = Json::array();
    bool all = true;
    for (std::size_t a = 0; a < k; ++a) {
      if (agent.has_value() && *agent != a) continue;
      const AuditReport rep =
          strategyproofness_audit(inst, grid, a, rule, globals.jobs);
      all = all && rep.strategyproof;
      reports.push_back(audit_json(rep));
    }
    if (agent.has_value() && *agent >= k) {
      throw InvalidInputError("agent index out of range");
    }
    Json r;
    r["reports"] = reports;
    r["strategyproof"] = all;
    return r;
  });

  auto* uniq = mech->add_subcommand("uniqueness", "Check a payment table is PWYC");
  uniq->add_option("--table", table_path)->required();
  on(uniq, "mech uniqueness", [&](Json& params) {
    params["table"] = table_path;
    const PaymentTable t = load_payment_table(table_path);
    const UniquenessReport rep = check_pwyc_uniqueness(t.rule, t.costs);
    Json r;
    r["unique"] = rep.unique;
    r["constants"] = rep.constants;
    if (rep.witness.has_value()) {
      const UniquenessEdge& e = *rep.witness;
      r["witness"] = {{"agent", e.agent},
                      {"m", to_json(e.m)},
                      {"m_prime", to_json(e.m_prime)},
                      {"slack", e.slack},
                      {"slack_prime", e.slack_prime}};
    } else {
      r["witness"] = nullptr;
    }
    return r;
  });

  std::size_t witness_h = 18;
  double witness_delta = 0.5;
  std::string mprime_text;
  std::size_t witness_trials = 100000;
  bool no_exact = false, mc_neighbor = false;
  auto* wit = mech->add_subcommand("witness", "Local obliviousness witness");
  wit->add_option("--hypotheses", witness_h)->capture_default_str();
  wit->add_option("--delta", witness_delta)->capture_default_str();
  wit->add_option("--m", m_text)->required();
  wit->add_option("--m-prime", mprime_text)->required();
  wit->add_option("--mc-trials", witness_trials)->capture_default_str();
  wit->add_flag("--no-exact", no_exact, "Skip the exact oracle");
  wit->add_flag("--mc-neighbor", mc_neighbor, "Also run Monte Carlo at m'");
  on(wit, "mech witness", [&](Json& params) {
    params["hypotheses"] = witness_h;
    params["delta"] = witness_delta;
    params["m"] = m_text;
    params["m_prime"] = mprime_text;
    params["mc_trials"] = witness_trials;
    WitnessOptions o;
    o.exact = !no_exact;
    o.mc_trials = witness_trials;
    o.mc_on_neighbor = mc_neighbor;
    o.seed = globals.seed;
    Json r = witness_json(obliviousness_witness(
        parse_vector(m_text), parse_vector(mprime_text), witness_h,
        witness_delta, o));
    r["threshold"] = witness_threshold(witness_h);
    return r;
  });

  auto* pay = mech->add_subcommand("payments", "Payments at an allocation");
  pay->add_option("--instance", instance_path)->required();
  pay->add_option("--m", m_text, "Defaults to the planner allocation");
  pay->add_option("--rule", rule_name)
      ->check(CLI::IsMember({"pwyc", "vcg"}))
      ->capture_default_str();
  pay->add_flag("--clarke", clarke, "VCG with Clarke pivot terms");
  on(pay, "mech payments", [&](Json& params) {
    params["instance"] = instance_path;
    params["rule"] = rule_name;
    const Instance inst = load_instance(instance_path);
    const ContributionVector m =
        m_text.empty() ? solve_pac_allocation(inst) : parse_vector(m_text);
    const PaymentRule rule =
        rule_name == "pwyc"
            ? PaymentRule::pwyc(std::vector<double>(inst.num_agents(), 0.0))
            : PaymentRule::vcg(clarke ? clarke_pivots(inst)
                                      : std::vector<double>{});
    Json r;
    r["m"] = to_json(m);
    r["payments"] = rule.payments(inst, m);
    return r;
  });

  // reduce ----------------------------------------------------------------
  std::string setcover_path, out_path;
  auto* reduce = app.add_subcommand("reduce", "Set cover to collaborative PAC");
  reduce->add_option("--setcover", setcover_path)->required();
  reduce->add_option("--out", out_path, "Write the reduced instance here");
  on(reduce, "reduce", [&](Json& params) {
    params["setcover"] = setcover_path;
    params["out"] = out_path.empty() ? Json(nullptr) : Json(out_path);
    const SetCoverInstance sc = load_set_cover(setcover_path);
    const ReducedInstance red = set_cover_to_pac(sc);
    if (!out_path.empty()) save_instance(red.instance, out_path);
    Json r;
    r["instance"] = instance_summary(red.instance);
    r["num_subsets"] = red.num_subsets;
    r["num_elements"] = red.num_elements;
    r["min_eliminating_sample_count"] = min_eliminating_sample_count(red);
    r["set_cover_optimum"] = brute_force_set_cover(sc);
    return r;
  });

  // suite -----------------------------------------------------------------
  bool quick = false;
  int only = 0;
  auto* suite = app.add_subcommand("suite", "Run the acceptance criteria");
  suite->add_flag("--quick", quick, "Smaller sample sizes");
  suite->add_option("--only", only, "Run a single criterion")
      ->check(CLI::Range(1, verify::kNumCriteria));
  bool suite_failed = false;
  on(suite, "suite", [&](Json& params) {
    params["quick"] = quick;
    params["only"] = only == 0 ? Json(nullptr) : Json(only);
    verify::AcceptanceOptions o;
    o.quick = quick;
    o.seed = globals.seed;
    o.jobs = globals.jobs;
    // Timings go to stderr so stdout stays reproducible.
    auto progress = [&](const verify::CriterionResult& res) {
      err << verify::format_result(res) << "\n";
    };
    std::vector<verify::CriterionResult> results;
    if (only > 0) {
      results.push_back(verify::run_criterion(only, o));
      progress(results.back());
    } else {
      results = verify::run_acceptance(o, progress);
    }
    Json r;
    Json rows = Json::array();
    std::size_t passed = 0;
    for (const auto& res : results) {
      rows.push_back({{"id", res.id},
                      {"name", res.name},
                      {"pass", res.pass},
                      {"detail", res.detail}});
      if (res.pass) ++passed;
    }
    r["criteria"] = rows;
    r["passed"] = passed;
    r["failed"] = results.size() - passed;
    suite_failed = passed != results.size();
    return r;
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << CPAC_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitError;
  }

  try {
    Json params = Json::object();
    Json result = handler(params);
    Json doc;
    doc["command"] = command;
    doc["version"] = CPAC_VERSION;
    doc["seed"] = globals.seed;
    doc["jobs"] = globals.jobs;
    doc["parameters"] = params;
    doc["result"] = std::move(result);
    out << doc.dump(2) << "\n";
  } catch (const CapacityError& e) {
    err << "capacity exceeded: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return suite_failed ? kExitError : kExitOk;
}

}  // namespace cpac::cli
