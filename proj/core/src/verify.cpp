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

#include "puffercal/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "puffercal/errors.hpp"

namespace puffercal {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// Log-density evaluation of one mixture at sorted query points, via prefix
// and suffix log-sum-exp accumulators anchored per atom:
//   log m(y) = -log(2 theta)
//            + LSE(-y/theta + L(i), y/theta + R(i+1)),  i = #atoms <= y,
// where L(i) = LSE_{j<=i}(log w_j + x_j/theta), R(i) = LSE_{j>=i}(log w_j
// - x_j/theta). Exponents stay bounded because every x_j <= y term sits in
// L and every x_j > y term in R.
struct MixtureScan {
  const std::vector<double>& xs;
  std::vector<double> prefix;  // prefix[i] = L(i), size n
  std::vector<double> suffix;  // suffix[i] = R(i), size n + 1
  double theta;
  double log_norm;

  explicit MixtureScan(const LaplaceMixture& m)
      : xs(m.atoms().support()), theta(m.theta()),
        log_norm(std::log(2.0 * m.theta())) {
    const std::vector<double>& w = m.atoms().mass();
    const std::size_t n = xs.size();
    prefix.resize(n);
    suffix.assign(n + 1, kNegInf);
    double acc = kNegInf;
    for (std::size_t i = 0; i < n; ++i) {
      acc = log_add(acc, std::log(w[i]) + xs[i] / theta);
      prefix[i] = acc;
    }
    for (std::size_t i = n; i-- > 0;) {
      suffix[i] = log_add(suffix[i + 1], std::log(w[i]) - xs[i] / theta);
    }
  }

  double log_density(double y) const {
    const auto it = std::upper_bound(xs.begin(), xs.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    double value = kNegInf;
    if (i > 0) value = log_add(value, -y / theta + prefix[i - 1]);
    if (i < xs.size()) value = log_add(value, y / theta + suffix[i]);
    return value - log_norm;
  }

  // Log-MGF at +1/theta resp. -1/theta: the y -> +-inf ratio anchors.
  double limit_up() const { return prefix.back(); }
  double limit_down() const { return suffix.front(); }
};

}  // namespace

VerificationReport worst_case_log_ratio(const LaplaceMixture& m1,
                                        const LaplaceMixture& m2,
                                        const PrivacyBudget& eps) {
  if (m1.theta() != m2.theta()) {
    throw ValidationError(
        "mixtures must share one theta: the mechanism adds a single noise");
  }
  const MixtureScan s1(m1);
  const MixtureScan s2(m2);

  VerificationReport report;
  report.epsilon = eps.epsilon;
  report.max_abs_log_ratio = -1.0;

  auto consider = [&report](double value, double at) {
    if (value > report.max_abs_log_ratio) {
      report.max_abs_log_ratio = value;
      report.attained_at = at;
    }
  };

  // Kinks: the atoms of both mixtures, merged.
  const std::vector<double>& a = m1.atoms().support();
  const std::vector<double>& b = m2.atoms().support();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    double y;
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      y = a[i];
      if (j < b.size() && b[j] == y) ++j;
      ++i;
    } else {
      y = b[j];
      ++j;
    }
    consider(std::abs(s1.log_density(y) - s2.log_density(y)), y);
  }

  const double inf = std::numeric_limits<double>::infinity();
  consider(std::abs(s1.limit_up() - s2.limit_up()), inf);
  consider(std::abs(s1.limit_down() - s2.limit_down()), -inf);

  report.satisfied = report.max_abs_log_ratio <= eps.epsilon + kVerifyPassTol;
  return report;
}

VerificationReport verify_pair(const SystemConfig& config,
                               const SecretPair& pair, double theta,
                               const PrivacyBudget& eps) {
  const DiscreteDistribution prior1 = conditional_prior(config, first_arm(pair));
  const DiscreteDistribution prior2 =
      conditional_prior(config, second_arm(pair));

  if (prior1.same_as(prior2)) {
    VerificationReport report;
    report.max_abs_log_ratio = 0.0;
    report.attained_at = 0.0;
    report.epsilon = eps.epsilon;
    report.satisfied = true;
    report.pair = describe(pair);
    return report;
  }
  if (!(theta > 0.0)) {
    throw ValidationError("theta must be > 0 for distinct secret arms");
  }
  const LaplaceNoise noise(theta);
  VerificationReport report = worst_case_log_ratio(
      output_density(prior1, noise), output_density(prior2, noise), eps);
  report.pair = describe(pair);
  return report;
}

}  // namespace puffercal
