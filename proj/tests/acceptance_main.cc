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

// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Usage: cpac_acceptance [--quick] [--only ID] [--seed S] [--jobs N]

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <thread>

#include "cpac/verify/acceptance.h"

int main(int argc, char** argv) {
  cpac::verify::AcceptanceOptions options;
  options.jobs = std::max(1u, std::thread::hardware_concurrency());
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    const bool has_value = i + 1 < argc;
    if (arg == "--quick") {
      options.quick = true;
    } else if (arg == "--only" && has_value) {
      only = std::atoi(argv[++i]);
    } else if (arg == "--seed" && has_value) {
      options.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (arg == "--jobs" && has_value) {
      options.jobs = std::strtoull(argv[++i], nullptr, 10);
    } else {
      std::fprintf(stderr, "unknown argument: %s\n", argv[i]);
      return 2;
    }
  }

  int failed = 0;
  auto report = [&](const cpac::verify::CriterionResult& r) {
    std::printf("%s\n", cpac::verify::format_result(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  };
  if (only > 0) {
    report(cpac::verify::run_criterion(only, options));
  } else {
    cpac::verify::run_acceptance(options, report);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
