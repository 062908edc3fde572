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

// The uncoordinated contribution game. Each agent picks m_i and receives
//
//   u_i(m) = [agent i's PAC requirement holds at m] - c_i m_i.
//
// Contributing more than n_i^ind (the solo sample complexity) is strictly
// dominated, so pure equilibria are searched for in the box
// prod_i [0, n_i^ind].

#ifndef CPAC_GAME_H_
#define CPAC_GAME_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpac/feasibility.h"
#include "cpac/instance.h"

namespace cpac {

struct BestResponseStep {
  std::size_t agent = 0;
  std::int64_t old_value = 0;
  std::int64_t new_value = 0;
};

struct GameOutcome {
  std::vector<ContributionVector> pure_ne;  // sorted
  std::optional<double> best_ne_cost;
  std::optional<ContributionVector> best_ne;
  std::optional<double> opt_cost;
  std::optional<ContributionVector> optimum;
  std::optional<double> pos;
  std::vector<BestResponseStep> br_trace;
  std::string status;
};

struct GameOptions {
  OracleOptions oracle = OracleOptions::from_env();
  // Largest strategy box enumerated; ENUM_CAP overrides the default.
  std::size_t enumeration_cap = 1000000;
  std::size_t jobs = 1;

  static GameOptions from_env();
};

// Shares one compiled oracle and the solo complexities across queries.
class ContributionGame {
 public:
  explicit ContributionGame(const Instance& instance,
                            const GameOptions& options = GameOptions::from_env());

  const Instance& instance() const { return oracle_.instance(); }
  const PacOracle& oracle() const { return oracle_; }
  std::int64_t individual_complexity(std::size_t agent) const {
    return solo_[agent];
  }
  const std::vector<std::int64_t>& strategy_box() const { return solo_; }

  double utility(const ContributionVector& m, std::size_t agent) const;

  // Agent i's best reply to the other entries of m (m_i itself is ignored).
  std::int64_t best_response(const ContributionVector& m,
                             std::size_t agent) const;

  bool is_pure_ne(const ContributionVector& m) const;

  GameOutcome enumerate_pure_ne() const;
  GameOutcome price_of_stability() const;

  enum class DynamicsEnd { kConverged, kCycle, kSweepLimit };
  struct Dynamics {
    ContributionVector final_profile;
    std::vector<BestResponseStep> trace;
    DynamicsEnd end = DynamicsEnd::kSweepLimit;
  };
  // Round-robin best responses from `start`; stops at a fixed point, on
  // revisiting a (profile, next agent) state, or after `max_sweeps`.
  Dynamics best_response_dynamics(const ContributionVector& start,
                                  std::size_t max_sweeps = 1000) const;

 private:
  GameOptions options_;
  PacOracle oracle_;
  std::vector<std::int64_t> solo_;
};

std::string to_string(ContributionGame::DynamicsEnd end);

double utility(const Instance& instance, const ContributionVector& m,
               std::size_t agent);
std::int64_t best_response(const Instance& instance,
                           const ContributionVector& m, std::size_t agent);
GameOutcome enumerate_pure_ne(const Instance& instance);
GameOutcome price_of_stability(const Instance& instance);

// Three agents on three points, full labeling class, epsilon = 1/3,
// delta = 2/3; has no pure equilibrium.
Instance nonexistence_instance(double cost = 0.25);

// Two points x_A, x_B and the full labeling class. Alice puts 1 - 2 eps on
// x_A, Bob puts 1 - 2 eps on x_B. Cost defaults to the uniform
// self-sufficient cost below.
Instance alice_bob_instance(double epsilon, double delta,
                            std::optional<double> cost = {});

// delta that makes one sample from each agent exactly sufficient.
double alice_bob_delta(double epsilon);

// Points x_1..x_n, y, z (indices 0..n-1, n, n+1). Class: the all-negative
// hypothesis and, for each i, the one positive on x_i and z. Alice is
// uniform on the x's with n = ceil(1 / (2 eps)); Bob puts eps on z and
// 1 - eps on y.
Instance pos_instance(double epsilon, double delta,
                      std::optional<double> cost = {});

// 1 / (2 ceil(ln(H / delta) / epsilon)): keeps c_i n_i^ind < 1 for every
// agent since n_i^ind never exceeds the union-bound cap.
double self_sufficient_cost(std::size_t num_hypotheses, double epsilon,
                            double delta);

}  // namespace cpac

#endif  // CPAC_GAME_H_
