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

#ifndef PUFFERCAL_MECHANISM_HPP_
#define PUFFERCAL_MECHANISM_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "puffercal/dist.hpp"

namespace puffercal {

// Zero-mean Laplace noise with density e^{-|z|/theta} / (2 theta).
struct LaplaceNoise {
  double theta;
  explicit LaplaceNoise(double theta);
};

// Inverse-CDF Laplace sampler over an explicit 64-bit seeded generator, so
// draws are bit-stable across runs and platforms. One sampler per thread.
class LaplaceSampler {
 public:
  LaplaceSampler(LaplaceNoise noise, std::uint64_t seed);
  double next();

 private:
  double theta_;
  std::mt19937_64 engine_;
};

// First draw of a sampler seeded with `seed`.
double sample(LaplaceNoise noise, std::uint64_t seed);

// Sum of the present users' realized values plus one Laplace draw. Every
// realized value must lie in its user's support; absent users are omitted.
double answer_query(const SystemConfig& config,
                    const std::map<std::string, double>& realized,
                    LaplaceNoise noise, std::uint64_t seed);

// Finite Laplace mixture: the exact privatized output density
//   y -> sum_x mass(x) * e^{-|y-x|/theta} / (2 theta).
// Evaluation runs in log space throughout, so small theta against a wide
// support cannot underflow.
class LaplaceMixture {
 public:
  LaplaceMixture(DiscreteDistribution atoms, double theta);

  const DiscreteDistribution& atoms() const { return atoms_; }
  double theta() const { return theta_; }

  double log_density(double y) const;
  double evaluate(double y) const;  // density at y

 private:
  DiscreteDistribution atoms_;
  double theta_;
  std::vector<double> log_mass_;
};

LaplaceMixture output_density(const DiscreteDistribution& prior,
                              LaplaceNoise noise);

}  // namespace puffercal

#endif  // PUFFERCAL_MECHANISM_HPP_
