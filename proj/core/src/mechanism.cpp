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

#include "puffercal/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "puffercal/errors.hpp"

namespace puffercal {

LaplaceNoise::LaplaceNoise(double theta_in) : theta(theta_in) {
  if (!(std::isfinite(theta) && theta > 0.0)) {
    throw ValidationError("laplace scale theta must be finite and > 0");
  }
}

LaplaceSampler::LaplaceSampler(LaplaceNoise noise, std::uint64_t seed)
    : theta_(noise.theta), engine_(seed) {}

double LaplaceSampler::next() {
  // 53 uniform bits centered in (0, 1); the half-bit offset keeps the
  // inverse CDF away from its log singularities.
  const double u =
      (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  const double centered = u - 0.5;
  const double sign = centered < 0.0 ? -1.0 : 1.0;
  return -theta_ * sign * std::log1p(-2.0 * std::abs(centered));
}

double sample(LaplaceNoise noise, std::uint64_t seed) {
  return LaplaceSampler(noise, seed).next();
}

double answer_query(const SystemConfig& config,
                    const std::map<std::string, double>& realized,
                    LaplaceNoise noise, std::uint64_t seed) {
  double total = 0.0;
  for (const auto& [id, value] : realized) {
    const UserSpec& user = config.user(id);
    if (!user.distribution.contains(value)) {
      std::ostringstream msg;
      msg << "realized value " << value << " is outside the support of user "
          << id;
      throw ValidationError(msg.str());
    }
    total += value;
  }
  return total + sample(noise, seed);
}

LaplaceMixture::LaplaceMixture(DiscreteDistribution atoms_in, double theta_in)
    : atoms_(std::move(atoms_in)), theta_(theta_in) {
  if (!(std::isfinite(theta_) && theta_ > 0.0)) {
    throw ValidationError("laplace scale theta must be finite and > 0");
  }
  log_mass_.reserve(atoms_.size());
  for (double m : atoms_.mass()) log_mass_.push_back(std::log(m));
}

double LaplaceMixture::log_density(double y) const {
  const std::vector<double>& xs = atoms_.support();
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    top = std::max(top, log_mass_[i] - std::abs(y - xs[i]) / theta_);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    acc += std::exp(log_mass_[i] - std::abs(y - xs[i]) / theta_ - top);
  }
  return top + std::log(acc) - std::log(2.0 * theta_);
}

double LaplaceMixture::evaluate(double y) const {
  return std::exp(log_density(y));
}

LaplaceMixture output_density(const DiscreteDistribution& prior,
                              LaplaceNoise noise) {
  return LaplaceMixture(prior, noise.theta);
}

}  // namespace puffercal
