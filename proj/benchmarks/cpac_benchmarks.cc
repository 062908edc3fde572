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

#include <benchmark/benchmark.h>

#include "cpac/exact_opt.h"
#include "cpac/feasibility.h"
#include "cpac/game.h"
#include "cpac/lp.h"
#include "cpac/planner.h"
#include "cpac/verify/random.h"

namespace cpac {
namespace {

Instance fixed_instance(std::size_t agents, std::size_t hypotheses,
                        std::size_t domain) {
  verify::Rng rng(1234);
  verify::RandomInstanceSpec spec;
  spec.min_agents = spec.max_agents = agents;
  spec.min_hypotheses = spec.max_hypotheses = hypotheses;
  spec.min_domain = spec.max_domain = domain;
  spec.zero_mass_probability = 0.0;
  return verify::random_instance(rng, spec);
}

void BM_SolveLp(benchmark::State& state) {
  verify::Rng rng(7);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto rows = static_cast<std::size_t>(state.range(1));
  LinearProgram lp;
  do {
    lp = verify::random_lp(rng, n, rows);
  } while (lp.num_variables() != n || lp.num_rows() != rows);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp));
}
BENCHMARK(BM_SolveLp)->Args({3, 28})->Args({5, 120})->Args({8, 300});

void BM_PlanPac(benchmark::State& state) {
  const Instance inst = fixed_instance(3, static_cast<std::size_t>(state.range(0)), 12);
  for (auto _ : state) benchmark::DoNotOptimize(plan_pac(inst));
}
BENCHMARK(BM_PlanPac)->Arg(8)->Arg(16)->Arg(32);

void BM_PacOracleCompile(benchmark::State& state) {
  const Instance inst = fixed_instance(3, static_cast<std::size_t>(state.range(0)), 10);
  for (auto _ : state) benchmark::DoNotOptimize(PacOracle(inst));
}
BENCHMARK(BM_PacOracleCompile)->Arg(4)->Arg(8)->Arg(16);

void BM_PacOracleEvaluate(benchmark::State& state) {
  const Instance inst = fixed_instance(3, static_cast<std::size_t>(state.range(0)), 10);
  const PacOracle oracle(inst);
  const ContributionVector m{5, 7, 3};
  for (auto _ : state) benchmark::DoNotOptimize(oracle.feasible(m));
}
BENCHMARK(BM_PacOracleEvaluate)->Arg(4)->Arg(8)->Arg(16);

void BM_MonteCarlo(benchmark::State& state) {
  const Instance inst = nonexistence_instance();
  const ContributionVector m{3, 3, 3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(monte_carlo_pac_failure_all(inst, m, 10000, 42));
  }
}
BENCHMARK(BM_MonteCarlo);

void BM_ExactMinCost(benchmark::State& state) {
  const Instance inst = fixed_instance(static_cast<std::size_t>(state.range(0)), 6, 6);
  const auto oracle = make_oracle(inst, Objective::kPac);
  for (auto _ : state) benchmark::DoNotOptimize(exact_min_cost_search(*oracle));
}
BENCHMARK(BM_ExactMinCost)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_EnumeratePureNe(benchmark::State& state) {
  const double eps = 0.1;
  const ContributionGame game(alice_bob_instance(eps, alice_bob_delta(eps)));
  for (auto _ : state) benchmark::DoNotOptimize(game.enumerate_pure_ne());
}
BENCHMARK(BM_EnumeratePureNe);

}  // namespace
}  // namespace cpac

BENCHMARK_MAIN();
