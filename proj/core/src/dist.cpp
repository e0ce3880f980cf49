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

#include "puffercal/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "puffercal/errors.hpp"

namespace puffercal {

namespace {

void validate_raw(const std::vector<double>& support,
                  const std::vector<double>& mass) {
  if (support.empty()) {
    throw ValidationError("distribution must have at least one support point");
  }
  if (support.size() != mass.size()) {
    throw ValidationError("support and mass lengths differ");
  }
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (!std::isfinite(support[i])) {
      throw ValidationError("support values must be finite");
    }
    if (!std::isfinite(mass[i]) || mass[i] < 0.0) {
      throw ValidationError("mass values must be finite and nonnegative");
    }
    if (i > 0 && !(support[i] > support[i - 1])) {
      throw ValidationError("support must be strictly increasing");
    }
  }
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  if (std::abs(total - 1.0) > kMassSumTol) {
    std::ostringstream msg;
    msg << "mass must sum to 1 within " << kMassSumTol << ", got " << total;
    throw ValidationError(msg.str());
  }
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> support,
                                           std::vector<double> mass) {
  validate_raw(support, mass);
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (mass[i] > 0.0) {
      support_.push_back(support[i]);
      mass_.push_back(mass[i]);
      total += mass[i];
    }
  }
  if (support_.empty()) {
    throw ValidationError("distribution has no positive mass");
  }
  // Masses already summing to one at float noise stay untouched, so
  // serialization round-trips are bit-exact.
  if (std::abs(total - 1.0) > 1e-13) {
    for (double& m : mass_) m /= total;
  }
}

DiscreteDistribution DiscreteDistribution::point_mass(double value) {
  return DiscreteDistribution({value}, {1.0});
}

DiscreteDistribution DiscreteDistribution::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("bernoulli parameter must lie in [0, 1]");
  }
  if (p == 0.0) return point_mass(0.0);
  if (p == 1.0) return point_mass(1.0);
  return DiscreteDistribution({0.0, 1.0}, {1.0 - p, p});
}

double DiscreteDistribution::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) m += support_[i] * mass_[i];
  return m;
}

double DiscreteDistribution::max_abs_value() const {
  return std::max(std::abs(support_.front()), std::abs(support_.back()));
}

double DiscreteDistribution::mass_at(double x, double tol) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), x - tol);
  if (it == support_.end() || std::abs(*it - x) > tol) return 0.0;
  return mass_[static_cast<std::size_t>(it - support_.begin())];
}

bool DiscreteDistribution::contains(double x, double tol) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), x - tol);
  return it != support_.end() && std::abs(*it - x) <= tol;
}

DiscreteDistribution DiscreteDistribution::shifted(double offset) const {
  std::vector<double> moved = support_;
  for (double& x : moved) x += offset;
  DiscreteDistribution out = *this;
  out.support_ = std::move(moved);
  return out;
}

bool DiscreteDistribution::same_as(const DiscreteDistribution& other,
                                   double tol) const {
  if (support_.size() != other.support_.size()) return false;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (std::abs(support_[i] - other.support_[i]) > tol) return false;
    if (std::abs(mass_[i] - other.mass_[i]) > tol) return false;
  }
  return true;
}

CumulativeDistribution::CumulativeDistribution(
    const DiscreteDistribution& dist)
    : support_(dist.support()) {
  cum_.reserve(dist.size());
  double run = 0.0;
  for (double m : dist.mass()) {
    run += m;
    cum_.push_back(run);
  }
  cum_.back() = 1.0;
}

double CumulativeDistribution::value_at(double x) const {
  auto it = std::upper_bound(support_.begin(), support_.end(), x);
  if (it == support_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

CumulativeDistribution cdf(const DiscreteDistribution& dist) {
  return CumulativeDistribution(dist);
}

DiscreteDistribution convolve(const DiscreteDistribution& p,
                              const DiscreteDistribution& q) {
  std::vector<std::pair<double, double>> sums;
  sums.reserve(p.size() * q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      sums.emplace_back(p.support()[i] + q.support()[j],
                        p.mass()[i] * q.mass()[j]);
    }
  }
  std::sort(sums.begin(), sums.end());

  std::vector<double> support;
  std::vector<double> mass;
  for (const auto& [value, m] : sums) {
    if (!support.empty() && value - support.back() <= kValueMergeTol) {
      mass.back() += m;
    } else {
      support.push_back(value);
      mass.push_back(m);
    }
  }
  return DiscreteDistribution(std::move(support), std::move(mass));
}

UserSpec::UserSpec(std::string id_in, double presence_in,
                   DiscreteDistribution distribution_in)
    : id(std::move(id_in)),
      presence(presence_in),
      distribution(std::move(distribution_in)) {
  if (id.empty()) throw ValidationError("user id must be non-empty");
  if (!(presence >= 0.0 && presence <= 1.0)) {
    throw ValidationError("presence probability must lie in [0, 1]: user " +
                          id);
  }
}

SystemConfig::SystemConfig(std::vector<UserSpec> users)
    : users_(std::move(users)) {
  if (users_.empty()) {
    throw ValidationError("system config must have at least one user");
  }
  std::unordered_set<std::string> seen;
  for (const UserSpec& u : users_) {
    if (!seen.insert(u.id).second) {
      throw ValidationError("duplicate user id: " + u.id);
    }
  }
}

const UserSpec& SystemConfig::user(const std::string& id) const {
  for (const UserSpec& u : users_) {
    if (u.id == id) return u;
  }
  throw ValidationError("unknown user id: " + id);
}

bool SystemConfig::has_user(const std::string& id) const {
  for (const UserSpec& u : users_) {
    if (u.id == id) return true;
  }
  return false;
}

SecretArm first_arm(const SecretPair& pair) {
  return std::visit(
      [](const auto& p) -> SecretArm {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ValuePair>) {
          return SecretValue{p.user_id, p.a};
        } else if constexpr (std::is_same_v<T, ValueAbsent>) {
          return SecretValue{p.user_id, p.a};
        } else if constexpr (std::is_same_v<T, DistAbsent>) {
          return SecretDistribution{p.user_id, p.dist};
        } else {
          return SecretDistribution{p.user_id, p.p};
        }
      },
      pair);
}

SecretArm second_arm(const SecretPair& pair) {
  return std::visit(
      [](const auto& p) -> SecretArm {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ValuePair>) {
          return SecretValue{p.user_id, p.b};
        } else if constexpr (std::is_same_v<T, ValueAbsent>) {
          return SecretAbsent{p.user_id};
        } else if constexpr (std::is_same_v<T, DistAbsent>) {
          return SecretAbsent{p.user_id};
        } else {
          return SecretDistribution{p.user_id, p.q};
        }
      },
      pair);
}

const std::string& pair_user(const SecretPair& pair) {
  return std::visit([](const auto& p) -> const std::string& { return p.user_id; },
                    pair);
}

std::string describe(const SecretPair& pair) {
  std::ostringstream out;
  std::visit(
      [&out](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        const std::string who = p.user_id.empty() ? "?" : p.user_id;
        if constexpr (std::is_same_v<T, ValuePair>) {
          out << "(s_a, s_b) user=" << who << " a=" << p.a << " b=" << p.b;
        } else if constexpr (std::is_same_v<T, ValueAbsent>) {
          out << "(s_a, s_absent) user=" << who << " a=" << p.a;
        } else if constexpr (std::is_same_v<T, DistAbsent>) {
          out << "(s_P, s_absent) user=" << who;
        } else {
          out << "(s_P, s_Q) user=" << who;
        }
      },
      pair);
  return out.str();
}

DiscreteDistribution background_sum(const SystemConfig& config,
                                    const std::string& excluded_user) {
  if (!config.has_user(excluded_user)) {
    throw ValidationError("unknown user id: " + excluded_user);
  }
  DiscreteDistribution acc = DiscreteDistribution::point_mass(0.0);
  for (const UserSpec& u : config.users()) {
    if (u.id == excluded_user) continue;
    acc = convolve(acc, u.distribution);
  }
  return acc;
}

DiscreteDistribution conditional_prior(const SystemConfig& config,
                                       const SecretArm& arm) {
  return std::visit(
      [&config](const auto& a) -> DiscreteDistribution {
        using T = std::decay_t<decltype(a)>;
        const DiscreteDistribution bg = background_sum(config, a.user_id);
        if constexpr (std::is_same_v<T, SecretValue>) {
          return bg.shifted(a.value);
        } else if constexpr (std::is_same_v<T, SecretAbsent>) {
          return bg;
        } else {
          return convolve(bg, a.dist);
        }
      },
      arm);
}

}  // namespace puffercal
