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

#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cpac/instance.h"
#include "cpac/planner.h"
#include "test_util.h"

namespace cpac::cli {
namespace {

using cpac::testing::data_path;

struct CliRun {
  int code = -1;
  std::string out, err;
  nlohmann::json doc() const { return nlohmann::json::parse(out); }
};

CliRun run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

TEST(Cli, PlanReportsVectorAndLpStats) {
  const CliRun r = run_cli({"plan", "--instance", data_path("nonexistence.json"),
                         "--objective", "pac"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = r.doc();
  EXPECT_EQ(doc["command"], "plan");
  EXPECT_EQ(doc["seed"], 42);
  EXPECT_EQ(doc["result"]["m"].size(), 3u);
  EXPECT_EQ(doc["result"]["lp_status"], "optimal");
  // Floats survive the round trip bit for bit.
  const PlanResult plan = plan_pac(load_instance(data_path("nonexistence.json")));
  EXPECT_EQ(doc["result"]["lp_cost"].get<double>(), plan.lp_cost);
}

TEST(Cli, PlanPipeline) {
  const CliRun r = run_cli({"plan", "--instance", data_path("two_agents.json"),
                         "--pipeline", "--scale-d", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_GE(r.doc()["result"]["multiplier"].get<int>(), 1);
}

TEST(Cli, GameNonexistenceHasNoEquilibrium) {
  const CliRun r = run_cli({"game", "nonexistence"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.doc()["result"]["num_pure_ne"], 0);
  EXPECT_TRUE(r.doc()["result"]["pure_ne"].empty());
}

TEST(Cli, ExactAndRatio) {
  const CliRun e = run_cli({"exact", "--instance", data_path("alice_bob.json")});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  EXPECT_EQ(e.doc()["result"]["m"], nlohmann::json::array({1, 1}));
  const CliRun r = run_cli({"ratio", "--instance", data_path("two_agents.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto res = r.doc()["result"];
  EXPECT_LE(res["lp_ratio"].get<double>(), res["lp_ratio_bound"].get<double>());
}

TEST(Cli, OracleWithMonteCarloIsSeeded) {
  const std::vector<std::string> base{"oracle", "--instance",
                                      data_path("nonexistence.json"), "--m",
                                      "1,0,0", "--mc-trials", "500"};
  auto with_seed = [&](const std::string& seed) {
    std::vector<std::string> args{"--seed", seed};
    args.insert(args.end(), base.begin(), base.end());
    return run_cli(args);
  };
  const CliRun a = with_seed("7"), b = with_seed("7"), c = with_seed("8");
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_FALSE(a.doc()["result"]["feasible"].get<bool>());
}

TEST(Cli, ExpectedOracle) {
  const CliRun r = run_cli({"oracle", "--instance", data_path("two_agents.json"),
                         "--objective", "expected", "--m", "20,20"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.doc()["result"]["feasible"].get<bool>());
}

TEST(Cli, MechanismCommands) {
  const CliRun u = run_cli({"mech", "uniqueness", "--table",
                         data_path("perturbed_table.json")});
  ASSERT_EQ(u.code, kExitOk) << u.err;
  EXPECT_FALSE(u.doc()["result"]["unique"].get<bool>());
  const CliRun a = run_cli({"mech", "audit", "--instance",
                         data_path("single_pair.json"), "--reimbursement", "2"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_FALSE(a.doc()["result"]["strategyproof"].get<bool>());
  const CliRun w = run_cli({"mech", "witness", "--m", "151,151", "--m-prime",
                         "152,151", "--mc-trials", "0", "--no-exact"});
  ASSERT_EQ(w.code, kExitOk) << w.err;
  EXPECT_TRUE(w.doc()["result"]["boxes_ok"].get<bool>());
}

TEST(Cli, ReduceWritesInstance) {
  const std::string out = ::testing::TempDir() + "cpac_cli_reduced.json";
  const CliRun r = run_cli({"reduce", "--setcover", data_path("setcover.json"),
                         "--out", out});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.doc()["result"]["min_eliminating_sample_count"],
            r.doc()["result"]["set_cover_optimum"]);
  EXPECT_EQ(load_instance(out).num_hypotheses(), 6u);
  std::remove(out.c_str());
}

TEST(Cli, SuiteSingleCriterion) {
  const CliRun r = run_cli({"suite", "--only", "9"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.doc()["result"]["passed"], 1);
  EXPECT_NE(r.err.find("PASS"), std::string::npos);
}

TEST(Cli, UnknownFlagIsUsageError) {
  const CliRun r = run_cli({"plan", "--bogus"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, MissingSubcommandIsUsageError) {
  EXPECT_EQ(run_cli({}).code, kExitError);
}

TEST(Cli, MissingFileIsError) {
  const CliRun r = run_cli({"plan", "--instance", "/nonexistent/instance.json"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}

TEST(Cli, BadVectorIsError) {
  EXPECT_EQ(run_cli({"oracle", "--instance", data_path("alice_bob.json"), "--m",
                     "1,x"})
                .code,
            kExitError);
}

TEST(Cli, OracleCapacityExitsWithTwo) {
  ::setenv("ORACLE_CAP", "1", 1);
  const CliRun r = run_cli({"oracle", "--instance", data_path("nonexistence.json"),
                         "--m", "1,1,1"});
  ::unsetenv("ORACLE_CAP");
  EXPECT_EQ(r.code, kExitCapacity) << r.err;
}

TEST(Cli, EnumerationCapacityExitsWithTwo) {
  ::setenv("ENUM_CAP", "2", 1);
  const CliRun r = run_cli({"game", "alice-bob"});
  ::unsetenv("ENUM_CAP");
  EXPECT_EQ(r.code, kExitCapacity) << r.err;
}

TEST(Cli, HelpExitsCleanly) {
  const CliRun r = run_cli({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("suite"), std::string::npos);
}

}  // namespace
}  // namespace cpac::cli
