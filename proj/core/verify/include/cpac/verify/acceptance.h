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

// End-to-end acceptance checks. Each criterion is self-contained, seeded and
// reports pass/fail with a one-line summary of the numbers behind it.

#ifndef CPAC_VERIFY_ACCEPTANCE_H_
#define CPAC_VERIFY_ACCEPTANCE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cpac::verify {

inline constexpr int kNumCriteria = 11;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  // Smaller suites and fewer Monte Carlo trials; for smoke runs only.
  bool quick = false;
  std::uint64_t seed = 42;
  std::size_t jobs = 1;
};

std::string criterion_name(int id);

// Never throws; an exception inside a check becomes a failing result.
CriterionResult run_criterion(int id, const AcceptanceOptions& options);

std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options,
    const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS  3  name  (1.2s)  detail"
std::string format_result(const CriterionResult& result);

}  // namespace cpac::verify

#endif  // CPAC_VERIFY_ACCEPTANCE_H_
