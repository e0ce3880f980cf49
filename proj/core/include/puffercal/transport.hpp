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

#ifndef PUFFERCAL_TRANSPORT_HPP_
#define PUFFERCAL_TRANSPORT_HPP_

#include <vector>

#include "puffercal/dist.hpp"

namespace puffercal {

// Coupling entries below this are treated as structural zeros, so supp(pi*)
// stays meaningful under inclusion-exclusion cancellation noise.
inline constexpr double kPlanPruneTol = 1e-12;
// CDF values closer than this are classified as equal.
inline constexpr double kCdfTieTol = 1e-12;

struct PlanEntry {
  double x = 0.0;        // source point, from the first marginal
  double x_prime = 0.0;  // destination point, from the second marginal
  double mass = 0.0;
};

// Sparse Kantorovich optimal transport plan between two discrete
// distributions, entries sorted lexicographically by (x, x').
class TransportPlan {
 public:
  TransportPlan(std::vector<PlanEntry> entries, DiscreteDistribution first,
                DiscreteDistribution second);

  const std::vector<PlanEntry>& entries() const { return entries_; }
  const DiscreteDistribution& first_marginal() const { return first_; }
  const DiscreteDistribution& second_marginal() const { return second_; }

  double total_mass() const;
  // Transport cost sum |x - x'| * mass, i.e. the 1-Wasserstein distance.
  double cost() const;

 private:
  std::vector<PlanEntry> entries_;
  DiscreteDistribution first_;
  DiscreteDistribution second_;
};

// The comonotone (quantile) coupling, evaluated atom pair by atom pair via
// the inclusion-exclusion of min{F_p, F_q} over consecutive CDF levels:
//   mass(x_k, x'_l) = min(F_k,G_l) - min(F_{k-1},G_l)
//                   - min(F_k,G_{l-1}) + min(F_{k-1},G_{l-1}).
TransportPlan kantorovich_plan(const DiscreteDistribution& p,
                               const DiscreteDistribution& q);

// max |x - x'| over supp(pi*).
double max_plan_distance(const TransportPlan& plan);

struct DeltaStarReport {
  // (x, delta*(x)) over supp(p) union supp(q), ascending in x. delta*(x) is
  // the largest displacement |x - x'| the optimal plan assigns to mass at x;
  // points carrying no p-mass transport nothing and report zero.
  std::vector<std::pair<double, double>> per_point;
  double sup = 0.0;
  double witness = 0.0;  // smallest x attaining sup
};

// Largest pairwise distance in supp(pi*), computed from the two CDFs alone.
// delta_star(p, q).sup equals max_plan_distance(kantorovich_plan(p, q)).
DeltaStarReport delta_star(const DiscreteDistribution& p,
                           const DiscreteDistribution& q);

}  // namespace puffercal

#endif  // PUFFERCAL_TRANSPORT_HPP_
