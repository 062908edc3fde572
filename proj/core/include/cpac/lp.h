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

// Dense two-phase primal simplex for
//
//   minimize c'x  subject to  Ax >= b,  x >= 0.
//
// Pivoting follows Bland's rule throughout, so the solve is deterministic and
// cannot cycle. Meant for the small LPs the planner builds (a few hundred rows,
// a handful of columns), not as a general-purpose solver.

#ifndef CPAC_LP_H_
#define CPAC_LP_H_

#include <cstddef>
#include <string>
#include <vector>

namespace cpac {

struct LinearProgram {
  std::vector<double> costs;
  std::vector<std::vector<double>> constraint_matrix;  // one row per constraint
  std::vector<double> rhs;
  // Optional, one per row when present.
  std::vector<std::string> row_tags;

  std::size_t num_variables() const { return costs.size(); }
  std::size_t num_rows() const { return constraint_matrix.size(); }

  // Throws InvalidInputError on dimension mismatches or non-finite entries.
  void validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  // Dual certificate when optimal: y >= 0, A'y <= c, b'y == objective.
  std::vector<double> dual;
  std::size_t iterations = 0;
};

struct LpOptions {
  double feasibility_tolerance = 1e-7;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-12;
  // Guard only; Bland's rule terminates well before this on sane input.
  std::size_t max_iterations = 1000000;
};

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace cpac

#endif  // CPAC_LP_H_
