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

// The `cpac` command line. Every subcommand prints one JSON document to `out`
// carrying the command, version, seed, parameters and result.
//
// Exit codes: 0 success, 1 usage or validation error, 2 capacity exceeded.
// `suite` also exits 1 when a criterion fails.

#ifndef CPAC_TOOLS_CLI_H_
#define CPAC_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace cpac::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCapacity = 2;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace cpac::cli

#endif  // CPAC_TOOLS_CLI_H_
