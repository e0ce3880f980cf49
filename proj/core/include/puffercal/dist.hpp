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

#ifndef PUFFERCAL_DIST_HPP_
#define PUFFERCAL_DIST_HPP_

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace puffercal {

// Mass sums must match 1 this closely on construction.
inline constexpr double kMassSumTol = 1e-9;
// Support values closer than this are merged when convolving.
inline constexpr double kValueMergeTol = 1e-12;
// Absolute tolerance for looking up a real value in a support.
inline constexpr double kValueLookupTol = 1e-9;

class CumulativeDistribution;

// A probability mass function on a finite, strictly increasing real support.
// Zero-mass entries are pruned on construction so that the stored support is
// exactly supp(P); the remaining masses are renormalized to sum to one.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<double> support, std::vector<double> mass);

  static DiscreteDistribution point_mass(double value);
  // Mass p at one, 1-p at zero. p==0 and p==1 collapse to point masses.
  static DiscreteDistribution bernoulli(double p);

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& mass() const { return mass_; }
  std::size_t size() const { return support_.size(); }

  double mean() const;
  double max_abs_value() const;

  // Mass at x, matching support values within `tol`; zero when absent.
  double mass_at(double x, double tol = kValueLookupTol) const;
  bool contains(double x, double tol = kValueLookupTol) const;

  DiscreteDistribution shifted(double offset) const;

  // Entry-wise equality of supports and masses within `tol`.
  bool same_as(const DiscreteDistribution& other, double tol = 1e-12) const;

 private:
  std::vector<double> support_;
  std::vector<double> mass_;
};

// Running partial sums of a DiscreteDistribution; the last entry is one.
class CumulativeDistribution {
 public:
  explicit CumulativeDistribution(const DiscreteDistribution& dist);

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& cum() const { return cum_; }

  // F(x): total mass at or below x. Zero below the support.
  double value_at(double x) const;

 private:
  std::vector<double> support_;
  std::vector<double> cum_;
};

CumulativeDistribution cdf(const DiscreteDistribution& dist);

// Distribution of the sum of two independent variables. Sums that collide
// within kValueMergeTol share one support point.
DiscreteDistribution convolve(const DiscreteDistribution& p,
                              const DiscreteDistribution& q);

// One participant: presence probability zeta and reporting distribution.
struct UserSpec {
  std::string id;
  double presence = 1.0;
  DiscreteDistribution distribution;

  UserSpec(std::string id, double presence, DiscreteDistribution distribution);
};

// The adversary prior rho = {(zeta_i, P_i)}: every user of the system.
class SystemConfig {
 public:
  explicit SystemConfig(std::vector<UserSpec> users);

  const std::vector<UserSpec>& users() const { return users_; }
  const UserSpec& user(const std::string& id) const;
  bool has_user(const std::string& id) const;

 private:
  std::vector<UserSpec> users_;
};

// One arm of a secret pair, naming what is assumed about a single user.
struct SecretValue {          // user present, reports a fixed value
  std::string user_id;
  double value = 0.0;
};
struct SecretAbsent {         // user absent
  std::string user_id;
};
struct SecretDistribution {   // user present, reports a draw from dist
  std::string user_id;
  DiscreteDistribution dist;
};
using SecretArm = std::variant<SecretValue, SecretAbsent, SecretDistribution>;

// The four secret-pair families.
struct ValuePair {            // (s_a, s_b)
  std::string user_id;
  double a = 0.0;
  double b = 0.0;
};
struct ValueAbsent {          // (s_a, s_absent)
  std::string user_id;
  double a = 0.0;
};
struct DistAbsent {           // (s_P, s_absent)
  std::string user_id;
  DiscreteDistribution dist;
};
struct DistPair {             // (s_P, s_Q)
  std::string user_id;
  DiscreteDistribution p;
  DiscreteDistribution q;
};
using SecretPair = std::variant<ValuePair, ValueAbsent, DistAbsent, DistPair>;

SecretArm first_arm(const SecretPair& pair);
SecretArm second_arm(const SecretPair& pair);
const std::string& pair_user(const SecretPair& pair);
std::string describe(const SecretPair& pair);

// Distribution of the query answer over everyone except `excluded_user`,
// with the remaining users taken as present (their presence probabilities
// cancel in every same-index ratio and are deliberately not folded in).
DiscreteDistribution background_sum(const SystemConfig& config,
                                    const std::string& excluded_user);

// Normalized distribution of the query answer X = f(D) conditioned on one
// secret arm: the background shifted by the reported value, the background
// itself, or the background convolved with the reported distribution.
DiscreteDistribution conditional_prior(const SystemConfig& config,
                                       const SecretArm& arm);

}  // namespace puffercal

#endif  // PUFFERCAL_DIST_HPP_
