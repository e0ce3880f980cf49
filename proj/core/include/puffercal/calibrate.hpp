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

#ifndef PUFFERCAL_CALIBRATE_HPP_
#define PUFFERCAL_CALIBRATE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "puffercal/dist.hpp"

namespace puffercal {

struct PrivacyBudget {
  double epsilon;
  explicit PrivacyBudget(double eps);
};

enum class CalibrationMethod {
  kSab,
  kSaPerp,
  kSpPerpMax,
  kSpPerpMgf,
  kSpPerpBernoulli,
  kSpqDelta,
  kSpqBernoulli,
  kSpqBernoulliRelaxed,
  kKantorovichGeneric,
};

std::string method_name(CalibrationMethod method);
std::optional<CalibrationMethod> method_from_name(const std::string& name);

struct RootDiagnostics {
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;
};

struct CalibrationResult {
  double theta = 0.0;
  CalibrationMethod method = CalibrationMethod::kSab;
  std::string witness;  // which pair / point / distribution bound theta
  std::optional<RootDiagnostics> root;
  std::string note;  // degenerate-case flags
};

// Inputs for the relaxed Bernoulli condition: two Bernoulli parameters and
// the law of the rest of the system's query answer.
struct BinaryRelaxContext {
  double p;
  double q;
  DiscreteDistribution background;

  BinaryRelaxContext(double p, double q, DiscreteDistribution background);

  // psi(x) over admissible x (those with background mass at x-1), ascending.
  std::vector<std::pair<double, double>> psi() const;
};

// theta = max |a_i - b_i| / epsilon. Empty input gives theta 0.
CalibrationResult calibrate_sab(const std::vector<ValuePair>& pairs,
                                const PrivacyBudget& eps);

// theta = max |a_i| / epsilon: absence equals reporting zero.
CalibrationResult calibrate_saperp(const std::vector<ValueAbsent>& pairs,
                                   const PrivacyBudget& eps);

// theta = max_t |t| / epsilon over all support points of all distributions.
CalibrationResult calibrate_spperp_max(
    const std::vector<DiscreteDistribution>& dists, const PrivacyBudget& eps);

// Per distribution, solves E[e^{|D|/theta}] = e^epsilon for theta with
// Brent's method and returns the largest root. Distributions supported on
// {0} alone need no noise and contribute theta 0.
CalibrationResult calibrate_spperp_mgf(
    const std::vector<DiscreteDistribution>& dists, const PrivacyBudget& eps,
    double tol = 1e-10);

// Closed form of the MGF condition for D ~ Bernoulli(p):
// theta = 1 / log((e^epsilon - (1-p)) / p).
CalibrationResult calibrate_spperp_bernoulli(double p,
                                             const PrivacyBudget& eps);

// theta = max over pairs of sup_x delta*(x) between the two user-level
// distributions, divided by epsilon; independent of the rest of the system.
CalibrationResult calibrate_spq(const std::vector<DistPair>& pairs,
                                const PrivacyBudget& eps);

// theta = 1 / epsilon, valid for any pair of Bernoulli users.
CalibrationResult calibrate_spq_bernoulli(const PrivacyBudget& eps);

// Relaxed Bernoulli condition:
// theta = sup over admissible x of 1 / log(e^eps + (e^eps - 1) psi(x)),
// always at most 1/eps.
CalibrationResult calibrate_spq_bernoulli_relaxed(const BinaryRelaxContext& ctx,
                                                  const PrivacyBudget& eps);

// System-level route: builds both conditional priors for every pair and
// takes max sup delta* / epsilon. Cross-checks each closed-form calibrator.
CalibrationResult calibrate_generic(const SystemConfig& config,
                                    const std::vector<SecretPair>& pairs,
                                    const PrivacyBudget& eps);

}  // namespace puffercal

#endif  // PUFFERCAL_CALIBRATE_HPP_
