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

#ifndef PUFFERCAL_VERIFY_HPP_
#define PUFFERCAL_VERIFY_HPP_

#include <string>

#include "puffercal/calibrate.hpp"
#include "puffercal/dist.hpp"
#include "puffercal/mechanism.hpp"

namespace puffercal {

// Additive slack on epsilon when deciding `satisfied`, absorbing float
// accumulation in mixture evaluation.
inline constexpr double kVerifyPassTol = 1e-9;

struct VerificationReport {
  double max_abs_log_ratio = 0.0;
  double attained_at = 0.0;  // +-infinity marks an asymptotic extremum
  bool satisfied = false;    // max_abs_log_ratio <= epsilon + kVerifyPassTol
  double epsilon = 0.0;
  std::string pair;
};

// Exact supremum over all real y of |log m1(y) - log m2(y)| for two Laplace
// mixtures sharing one theta. Between consecutive atoms each mixture equals
// A e^{y/theta} + B e^{-y/theta} with constant A, B >= 0, so the ratio is
// monotone in e^{2y/theta} there and extrema sit at atoms or at y -> +-inf;
// the two limits are the log-MGF differences at +-1/theta. Evaluating the
// atoms of both mixtures plus the two limits is therefore exhaustive.
VerificationReport worst_case_log_ratio(const LaplaceMixture& m1,
                                        const LaplaceMixture& m2,
                                        const PrivacyBudget& eps);

// Builds both conditional priors of the pair, adds Laplace(theta) to each,
// and checks both directions of the pufferfish inequality via the absolute
// log ratio. Identical arms are satisfied at any theta, including zero.
VerificationReport verify_pair(const SystemConfig& config,
                               const SecretPair& pair, double theta,
                               const PrivacyBudget& eps);

}  // namespace puffercal

#endif  // PUFFERCAL_VERIFY_HPP_
