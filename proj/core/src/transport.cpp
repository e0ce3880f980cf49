//
// Copyright 2026 The Puffercal Authors
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
//

#include "puffercal/transport.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace puffercal {

namespace {

// Coupling mass at (row k, column l) from the CDF arrays, F(-1) := 0.
// Both kantorovich_plan and delta_star classify support through this one
// expression, so their supports agree entry for entry.
double pair_mass(const std::vector<double>& F, const std::vector<double>& G,
                 std::size_t k, std::size_t l) {
  const double fk = F[k];
  const double fk1 = k > 0 ? F[k - 1] : 0.0;
  const double gl = G[l];
  const double gl1 = l > 0 ? G[l - 1] : 0.0;
  return std::min(fk, gl) - std::min(fk1, gl) - std::min(fk, gl1) +
         std::min(fk1, gl1);
}

}  // namespace

TransportPlan::TransportPlan(std::vector<PlanEntry> entries,
                             DiscreteDistribution first,
                             DiscreteDistribution second)
    : entries_(std::move(entries)),
      first_(std::move(first)),
      second_(std::move(second)) {}

double TransportPlan::total_mass() const {
  double total = 0.0;
  for (const PlanEntry& e : entries_) total += e.mass;
  return total;
}

double TransportPlan::cost() const {
  double total = 0.0;
  for (const PlanEntry& e : entries_) total += std::abs(e.x - e.x_prime) * e.mass;
  return total;
}

TransportPlan kantorovich_plan(const DiscreteDistribution& p,
                               const DiscreteDistribution& q) {
  const CumulativeDistribution Fp = cdf(p);
  const CumulativeDistribution Fq = cdf(q);
  const std::vector<double>& F = Fp.cum();
  const std::vector<double>& G = Fq.cum();
  std::vector<PlanEntry> entries;
  for (std::size_t k = 0; k < p.size(); ++k) {
    for (std::size_t l = 0; l < q.size(); ++l) {
      const double m = pair_mass(F, G, k, l);
      if (m > kPlanPruneTol) {
        entries.push_back({p.support()[k], q.support()[l], m});
      }
    }
  }
  return TransportPlan(std::move(entries), p, q);
}

double max_plan_distance(const TransportPlan& plan) {
  double sup = 0.0;
  for (const PlanEntry& e : plan.entries()) {
    sup = std::max(sup, std::abs(e.x - e.x_prime));
  }
  return sup;
}

DeltaStarReport delta_star(const DiscreteDistribution& p,
                           const DiscreteDistribution& q) {
  const CumulativeDistribution Fp = cdf(p);
  const CumulativeDistribution Fq = cdf(q);
  const std::vector<double>& F = Fp.cum();
  const std::vector<double>& G = Fq.cum();

  DeltaStarReport report;

  // Rows of p in ascending order; the plan moves row k's quantile slice
  // [F_{k-1}, F_k) onto a contiguous run of q atoms, so the extreme
  // displacement sits at the first or last partner.
  std::vector<double> row_delta(p.size(), 0.0);
  for (std::size_t k = 0; k < p.size(); ++k) {
    double best = 0.0;
    for (std::size_t l = 0; l < q.size(); ++l) {
      if (pair_mass(F, G, k, l) > kPlanPruneTol) {
        best = std::max(best, std::abs(p.support()[k] - q.support()[l]));
      }
    }
    row_delta[k] = best;
  }

  // Report over supp(p) union supp(q); q-only points carry no p-mass and
  // transport nothing.
  std::size_t i = 0, j = 0;
  auto push = [&report](double x, double d) {
    report.per_point.emplace_back(x, d);
  };
  while (i < p.size() || j < q.size()) {
    if (j == q.size() ||
        (i < p.size() && p.support()[i] < q.support()[j])) {
      push(p.support()[i], row_delta[i]);
      ++i;
    } else if (i == p.size() || q.support()[j] < p.support()[i]) {
      push(q.support()[j], 0.0);
      ++j;
    } else {  // same point in both supports
      push(p.support()[i], row_delta[i]);
      ++i;
      ++j;
    }
  }

  report.sup = 0.0;
  report.witness = report.per_point.front().first;
  for (const auto& [x, d] : report.per_point) {
    if (d > report.sup) {
      report.sup = d;
      report.witness = x;
    }
  }
  return report;
}

}  // namespace puffercal
