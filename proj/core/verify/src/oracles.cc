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

#include "cpac/verify/oracles.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "cpac/errors.h"

namespace cpac::verify {

std::vector<long double> seen_set_distribution(const Instance& instance,
                                               const ContributionVector& m) {
  const std::size_t n = instance.domain().size;
  if (n > 20) throw CapacityError("seen-set enumeration needs domain <= 20");
  instance.check_contribution(m);
  std::vector<long double> dist(std::size_t{1} << n, 0.0L);
  dist[0] = 1.0L;
  for (std::size_t i = 0; i < instance.num_agents(); ++i) {
    const auto& d = instance.agent(i).distribution;
    for (std::int64_t draw = 0; draw < m[i]; ++draw) {
      std::vector<long double> next(dist.size(), 0.0L);
      for (std::size_t mask = 0; mask < dist.size(); ++mask) {
        if (dist[mask] == 0.0L) continue;
        for (std::size_t x = 0; x < n; ++x) {
          if (d[x] == 0.0) continue;
          next[mask | (std::size_t{1} << x)] += dist[mask] * d[x];
        }
      }
      dist = std::move(next);
    }
  }
  return dist;
}

namespace {

// Largest true error, under `agent`, among hypotheses consistent with the
// target on every point of `seen`.
double worst_consistent_error(const Instance& instance, std::size_t target,
                              std::size_t agent, std::size_t seen) {
  const HypothesisClass& hs = instance.hypotheses();
  double worst = 0.0;
  for (std::size_t h = 0; h < hs.size(); ++h) {
    bool consistent = true;
    double mass = 0.0;
    for (std::size_t x = 0; x < hs.domain_size(); ++x) {
      if (hs[h][x] == hs[target][x]) continue;
      if ((seen >> x) & 1U) {
        consistent = false;
        break;
      }
      mass += instance.agent(agent).distribution[x];
    }
    if (consistent) worst = std::max(worst, mass);
  }
  return worst;
}

}  // namespace

double enumerate_pac_failure(const Instance& instance,
                             const ContributionVector& m, std::size_t target,
                             std::size_t agent) {
  const auto dist = seen_set_distribution(instance, m);
  long double failure = 0.0L;
  for (std::size_t mask = 0; mask < dist.size(); ++mask) {
    if (dist[mask] == 0.0L) continue;
    const double worst = worst_consistent_error(instance, target, agent, mask);
    if (worst > instance.epsilon() + kMassTolerance) failure += dist[mask];
  }
  return static_cast<double>(failure);
}

double enumerate_expected_error(const Instance& instance,
                                const ContributionVector& m,
                                std::size_t target, std::size_t agent) {
  const auto dist = seen_set_distribution(instance, m);
  long double total = 0.0L;
  for (std::size_t mask = 0; mask < dist.size(); ++mask) {
    if (dist[mask] == 0.0L) continue;
    total += dist[mask] * worst_consistent_error(instance, target, agent, mask);
  }
  return static_cast<double>(total);
}

namespace {

// Solves the square system M y = r by Gaussian elimination with partial
// pivoting; nullopt when singular.
std::optional<std::vector<double>> solve_square(
    std::vector<std::vector<double>> a, std::vector<double> r) {
  const std::size_t n = r.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    if (std::abs(a[pivot][col]) < 1e-12) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(r[pivot], r[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col) continue;
      const double f = a[row][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[row][c] -= f * a[col][c];
      r[row] -= f * r[col];
    }
  }
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = r[i] / a[i][i];
  return y;
}

}  // namespace

std::optional<VertexOptimum> vertex_enumeration(const LinearProgram& lp) {
  lp.validate();
  const std::size_t n = lp.num_variables();
  // Rows 0..m-1 are Ax >= b, rows m..m+n-1 are x_j >= 0.
  std::vector<std::vector<double>> rows = lp.constraint_matrix;
  std::vector<double> rhs = lp.rhs;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    rows.push_back(std::move(e));
    rhs.push_back(0.0);
  }
  const std::size_t total = rows.size();
  if (total > 24) throw CapacityError("vertex enumeration limited to 24 rows");

  std::optional<VertexOptimum> best;
  // Iterate over n-subsets via bitmasks.
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << total); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != n) continue;
    std::vector<std::vector<double>> a;
    std::vector<double> r;
    for (std::size_t row = 0; row < total; ++row) {
      if ((mask >> row) & 1U) {
        a.push_back(rows[row]);
        r.push_back(rhs[row]);
      }
    }
    const auto x = solve_square(std::move(a), std::move(r));
    if (!x.has_value()) continue;
    bool feasible = true;
    for (std::size_t row = 0; row < total && feasible; ++row) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += rows[row][j] * (*x)[j];
      feasible = lhs >= rhs[row] - 1e-9 * (1.0 + std::abs(rhs[row]));
    }
    if (!feasible) continue;
    double objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) objective += lp.costs[j] * (*x)[j];
    if (!best.has_value() || objective < best->objective) {
      best = VertexOptimum{objective, *x};
    }
  }
  return best;
}

std::optional<ContributionVector> scan_min_cost(
    std::size_t k, std::int64_t cap, const std::vector<double>& costs,
    const std::function<bool(const ContributionVector&)>& feasible) {
  std::optional<ContributionVector> best;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> m(k, 0);
  for (;;) {
    const ContributionVector v(m);
    const double c = v.cost(costs);
    if (c < best_cost - 1e-12 && feasible(v)) {
      best = v;
      best_cost = c;
    }
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (m[i] < cap) {
        ++m[i];
        std::fill(m.begin() + static_cast<std::ptrdiff_t>(i) + 1, m.end(), 0);
        break;
      }
      if (i == 0) return best;
    }
    if (k == 0) return best;
  }
}

}  // namespace cpac::verify
