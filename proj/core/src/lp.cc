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

#include "cpac/lp.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cpac/errors.h"

namespace cpac {

void LinearProgram::validate() const {
  const std::size_t n = costs.size();
  if (rhs.size() != constraint_matrix.size()) {
    throw InvalidInputError("rhs has " + std::to_string(rhs.size()) +
                            " entries for " +
                            std::to_string(constraint_matrix.size()) + " rows");
  }
  if (!row_tags.empty() && row_tags.size() != constraint_matrix.size()) {
    throw InvalidInputError("row_tags length does not match row count");
  }
  for (double c : costs) {
    if (!std::isfinite(c)) throw InvalidInputError("non-finite cost");
  }
  for (std::size_t r = 0; r < constraint_matrix.size(); ++r) {
    if (constraint_matrix[r].size() != n) {
      throw InvalidInputError("row " + std::to_string(r) + " has width " +
                              std::to_string(constraint_matrix[r].size()) +
                              ", expected " + std::to_string(n));
    }
    for (double a : constraint_matrix[r]) {
      if (!std::isfinite(a)) {
        throw InvalidInputError("non-finite coefficient in row " +
                                std::to_string(r));
      }
    }
    if (!std::isfinite(rhs[r])) {
      throw InvalidInputError("non-finite rhs in row " + std::to_string(r));
    }
  }
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

// Columns: structural x (n), surplus s (m), artificial a (m). Row r reads
// sigma_r (A_r x - s_r) + a_r = sigma_r b_r with sigma_r chosen so the rhs is
// nonnegative, which makes the artificials a feasible starting basis.
class Tableau {
 public:
  Tableau(const LinearProgram& lp, const LpOptions& options)
      : options_(options),
        n_(lp.num_variables()),
        m_(lp.num_rows()),
        cols_(n_ + 2 * m_),
        width_(cols_ + 1),
        rows_(m_, std::vector<double>(width_, 0.0)),
        basis_(m_),
        reduced_(width_, 0.0) {
    for (std::size_t r = 0; r < m_; ++r) {
      const double sigma = lp.rhs[r] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) {
        rows_[r][j] = sigma * lp.constraint_matrix[r][j];
      }
      rows_[r][n_ + r] = -sigma;
      rows_[r][n_ + m_ + r] = 1.0;
      rows_[r][cols_] = sigma * lp.rhs[r];
      basis_[r] = n_ + m_ + r;
    }
  }

  bool is_artificial(std::size_t j) const { return j >= n_ + m_; }

  // Sets the reduced-cost row for column costs `c` (length cols_).
  void price(const std::vector<double>& c) {
    std::copy(c.begin(), c.end(), reduced_.begin());
    reduced_[cols_] = 0.0;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const double cb = c[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) {
        reduced_[j] -= cb * rows_[r][j];
      }
    }
  }

  enum class Outcome { kOptimal, kUnbounded };

  // Bland's rule over columns accepted by `allowed`.
  Outcome run(const std::function<bool(std::size_t)>& allowed) {
    for (;;) {
      std::size_t entering = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed(j) && reduced_[j] < -options_.optimality_tolerance) {
          entering = j;
          break;
        }
      }
      if (entering == cols_) return Outcome::kOptimal;

      std::size_t leaving = rows_.size();
      double best = 0.0;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        const double a = rows_[r][entering];
        if (a <= options_.pivot_tolerance) continue;
        const double ratio = rows_[r][cols_] / a;
        const double slack = 1e-12 * (1.0 + std::abs(best));
        if (leaving == rows_.size() || ratio < best - slack) {
          best = ratio;
          leaving = r;
        } else if (ratio <= best + slack && basis_[r] < basis_[leaving]) {
          leaving = r;
        }
      }
      if (leaving == rows_.size()) return Outcome::kUnbounded;
      pivot(leaving, entering);
    }
  }

  void pivot(std::size_t r, std::size_t j) {
    if (++iterations_ > options_.max_iterations) {
      throw SolverError("simplex iteration limit exceeded");
    }
    std::vector<double>& row = rows_[r];
    const double p = row[j];
    for (double& v : row) v /= p;
    row[j] = 1.0;
    auto eliminate = [&](std::vector<double>& target) {
      const double f = target[j];
      if (f == 0.0) return;
      for (std::size_t c = 0; c < width_; ++c) {
        target[c] -= f * row[c];
        if (std::abs(target[c]) < 1e-15) target[c] = 0.0;
      }
      target[j] = 0.0;
    };
    for (std::size_t q = 0; q < rows_.size(); ++q) {
      if (q != r) eliminate(rows_[q]);
    }
    eliminate(reduced_);
    basis_[r] = j;
  }

  // Pivots basic artificials (at value zero) out of the basis; rows where no
  // structural or surplus column can replace them are redundant and dropped.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < rows_.size();) {
      if (!is_artificial(basis_[r])) {
        ++r;
        continue;
      }
      std::size_t replacement = cols_;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (std::abs(rows_[r][j]) > 1e-9) {
          replacement = j;
          break;
        }
      }
      if (replacement == cols_) {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        continue;
      }
      pivot(r, replacement);
      ++r;
    }
  }

  double objective_value() const { return -reduced_[cols_]; }
  double reduced_cost(std::size_t j) const { return reduced_[j]; }
  std::size_t iterations() const { return iterations_; }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (basis_[r] < n_) x[basis_[r]] = std::max(0.0, rows_[r][cols_]);
    }
    return x;
  }

  std::size_t num_columns() const { return cols_; }

 private:
  LpOptions options_;
  std::size_t n_;
  std::size_t m_;
  std::size_t cols_;
  std::size_t width_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::size_t> basis_;
  std::vector<double> reduced_;
  std::size_t iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
  lp.validate();
  const std::size_t n = lp.num_variables();
  const std::size_t m = lp.num_rows();
  Tableau tableau(lp, options);

  std::vector<double> phase1(tableau.num_columns(), 0.0);
  for (std::size_t j = n + m; j < tableau.num_columns(); ++j) phase1[j] = 1.0;
  tableau.price(phase1);
  tableau.run([](std::size_t) { return true; });

  LpSolution out;
  if (tableau.objective_value() > options.feasibility_tolerance) {
    out.status = LpStatus::kInfeasible;
    out.iterations = tableau.iterations();
    return out;
  }
  tableau.drive_out_artificials();

  std::vector<double> phase2(tableau.num_columns(), 0.0);
  std::copy(lp.costs.begin(), lp.costs.end(), phase2.begin());
  tableau.price(phase2);
  const auto outcome =
      tableau.run([&](std::size_t j) { return !tableau.is_artificial(j); });
  out.iterations = tableau.iterations();
  if (outcome == Tableau::Outcome::kUnbounded) {
    out.status = LpStatus::kUnbounded;
    return out;
  }

  out.status = LpStatus::kOptimal;
  out.x = tableau.primal();
  out.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.objective += lp.costs[j] * out.x[j];
  // The reduced cost of surplus column r is the multiplier of row r.
  out.dual.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    out.dual[r] = std::max(0.0, tableau.reduced_cost(n + r));
  }
  return out;
}

}  // namespace cpac
