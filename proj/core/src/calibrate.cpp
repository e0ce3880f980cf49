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

#include "puffercal/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "puffercal/errors.hpp"
#include "puffercal/root_finding.hpp"
#include "puffercal/transport.hpp"

namespace puffercal {

namespace {

// log E[e^{|D|/theta}] with the largest exponent factored out.
double log_mgf_abs(const DiscreteDistribution& dist, double inv_theta) {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    top = std::max(top, std::abs(dist.support()[i]) * inv_theta);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc += dist.mass()[i] *
           std::exp(std::abs(dist.support()[i]) * inv_theta - top);
  }
  return top + std::log(acc);
}

// d/dtheta log E[e^{|D|/theta}], for the Newton polish.
double log_mgf_abs_dtheta(const DiscreteDistribution& dist, double theta) {
  const double inv = 1.0 / theta;
  double top = 0.0;
  for (double x : dist.support()) top = std::max(top, std::abs(x) * inv);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double t = std::abs(dist.support()[i]);
    const double w = dist.mass()[i] * std::exp(t * inv - top);
    num += w * t;
    den += w;
  }
  return -num / (den * theta * theta);
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

}  // namespace

PrivacyBudget::PrivacyBudget(double eps) : epsilon(eps) {
  if (!(std::isfinite(eps) && eps > 0.0)) {
    throw ValidationError("privacy budget epsilon must be finite and > 0");
  }
}

std::string method_name(CalibrationMethod method) {
  switch (method) {
    case CalibrationMethod::kSab: return "sab";
    case CalibrationMethod::kSaPerp: return "saperp";
    case CalibrationMethod::kSpPerpMax: return "spperp-max";
    case CalibrationMethod::kSpPerpMgf: return "spperp-mgf";
    case CalibrationMethod::kSpPerpBernoulli: return "spperp-bernoulli";
    case CalibrationMethod::kSpqDelta: return "spq-delta";
    case CalibrationMethod::kSpqBernoulli: return "spq-bernoulli";
    case CalibrationMethod::kSpqBernoulliRelaxed: return "spq-bernoulli-relaxed";
    case CalibrationMethod::kKantorovichGeneric: return "generic";
  }
  return "unknown";
}

std::optional<CalibrationMethod> method_from_name(const std::string& name) {
  static const std::pair<const char*, CalibrationMethod> kTable[] = {
      {"sab", CalibrationMethod::kSab},
      {"saperp", CalibrationMethod::kSaPerp},
      {"spperp-max", CalibrationMethod::kSpPerpMax},
      {"spperp-mgf", CalibrationMethod::kSpPerpMgf},
      {"spperp-bernoulli", CalibrationMethod::kSpPerpBernoulli},
      {"spq-delta", CalibrationMethod::kSpqDelta},
      {"spq-bernoulli", CalibrationMethod::kSpqBernoulli},
      {"spq-bernoulli-relaxed", CalibrationMethod::kSpqBernoulliRelaxed},
      {"generic", CalibrationMethod::kKantorovichGeneric},
  };
  for (const auto& [key, value] : kTable) {
    if (name == key) return value;
  }
  return std::nullopt;
}

BinaryRelaxContext::BinaryRelaxContext(double p_in, double q_in,
                                       DiscreteDistribution background_in)
    : p(p_in), q(q_in), background(std::move(background_in)) {
  if (!(p > 0.0 && p < 1.0) || !(q > 0.0 && q < 1.0)) {
    throw ValidationError("bernoulli parameters must lie in (0, 1)");
  }
  if (p == q) {
    throw ValidationError("relaxed condition requires p != q");
  }
}

std::vector<std::pair<double, double>> BinaryRelaxContext::psi() const {
  const double lo = std::min(p, q);
  const double hi = std::max(p, q);
  std::vector<std::pair<double, double>> values;
  values.reserve(background.size());
  // Admissible x are exactly supp(background) + 1: the coupling mass
  // (q-p) * B(x-1) dividing the constraint must be positive.
  for (std::size_t i = 0; i < background.size(); ++i) {
    const double x = background.support()[i] + 1.0;
    const double b_prev = background.mass()[i];
    const double b_here = background.mass_at(x);
    values.emplace_back(x, (lo * b_prev + (1.0 - hi) * b_here) /
                               ((hi - lo) * b_prev));
  }
  return values;
}

CalibrationResult calibrate_sab(const std::vector<ValuePair>& pairs,
                                const PrivacyBudget& eps) {
  CalibrationResult result;
  result.method = CalibrationMethod::kSab;
  double best = 0.0;
  const ValuePair* arg = nullptr;
  for (const ValuePair& pr : pairs) {
    const double gap = std::abs(pr.a - pr.b);
    if (gap > best) {
      best = gap;
      arg = &pr;
    }
  }
  result.theta = best / eps.epsilon;
  if (arg != nullptr) {
    std::ostringstream w;
    w << "user=" << (arg->user_id.empty() ? "?" : arg->user_id)
      << " |a-b|=" << format_double(best);
    result.witness = w.str();
  } else {
    result.witness = "no pair exceeds zero gap";
    if (pairs.empty()) result.note = "empty pair list";
  }
  return result;
}

CalibrationResult calibrate_saperp(const std::vector<ValueAbsent>& pairs,
                                   const PrivacyBudget& eps) {
  CalibrationResult result;
  result.method = CalibrationMethod::kSaPerp;
  double best = 0.0;
  const ValueAbsent* arg = nullptr;
  for (const ValueAbsent& pr : pairs) {
    if (std::abs(pr.a) > best) {
      best = std::abs(pr.a);
      arg = &pr;
    }
  }
  result.theta = best / eps.epsilon;
  if (arg != nullptr) {
    std::ostringstream w;
    w << "user=" << (arg->user_id.empty() ? "?" : arg->user_id)
      << " |a|=" << format_double(best);
    result.witness = w.str();
  } else {
    result.witness = "no pair exceeds zero gap";
    if (pairs.empty()) result.note = "empty pair list";
  }
  return result;
}

CalibrationResult calibrate_spperp_max(
    const std::vector<DiscreteDistribution>& dists, const PrivacyBudget& eps) {
  CalibrationResult result;
  result.method = CalibrationMethod::kSpPerpMax;
  double best = 0.0;
  std::size_t arg = 0;
  bool found = false;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    const double m = dists[i].max_abs_value();
    if (m > best) {
      best = m;
      arg = i;
      found = true;
    }
  }
  result.theta = best / eps.epsilon;
  if (found) {
    std::ostringstream w;
    w << "distribution " << arg << " max|t|=" << format_double(best);
    result.witness = w.str();
  } else {
    result.witness = "all supports are {0}";
    result.note = dists.empty() ? "empty distribution list" : "no noise needed";
  }
  return result;
}

CalibrationResult calibrate_spperp_mgf(
    const std::vector<DiscreteDistribution>& dists, const PrivacyBudget& eps,
    double tol) {
  if (!(tol > 0.0)) throw ValidationError("tolerance must be > 0");
  CalibrationResult result;
  result.method = CalibrationMethod::kSpPerpMgf;
  result.theta = 0.0;
  bool any_positive = false;

  for (std::size_t i = 0; i < dists.size(); ++i) {
    const DiscreteDistribution& dist = dists[i];
    const double max_abs = dist.max_abs_value();
    if (max_abs == 0.0) continue;  // support {0}: contributes no noise
    any_positive = true;

    auto g = [&dist, &eps](double theta) {
      return log_mgf_abs(dist, 1.0 / theta) - eps.epsilon;
    };
    // g is strictly decreasing and g(max|t|/eps) <= 0 since
    // E[e^{|D|/theta}] <= e^{max|t|/theta}; halve downward until g > 0.
    const double theta_hi = max_abs / eps.epsilon;
    double root;
    BrentResult brent;
    brent.bracket_lo = brent.bracket_hi = theta_hi;
    if (g(theta_hi) >= 0.0) {
      // Point mass at the max-|t| atom: the bound is tight and the root is
      // the upper bracket itself (up to rounding of g there).
      root = theta_hi;
      brent.root = root;
    } else {
      double theta_lo = theta_hi;
      int halvings = 0;
      do {
        theta_lo *= 0.5;
        if (++halvings > 200) {
          throw NumericError("mgf bracket search failed to find a sign change");
        }
      } while (g(theta_lo) < 0.0);
      brent = brent_root(g, theta_lo, theta_hi, tol);
      root = brent.root;
      // Two Newton steps pin the residual to machine precision at any scale.
      for (int polish = 0; polish < 2; ++polish) {
        const double gval = g(root);
        const double slope = log_mgf_abs_dtheta(dist, root);
        if (gval == 0.0 || slope == 0.0) break;
        const double next = root - gval / slope;
        if (!(next > theta_lo && next < theta_hi * (1.0 + 1e-12))) break;
        root = next;
      }
    }

    if (root > result.theta) {
      result.theta = root;
      std::ostringstream w;
      w << "distribution " << i << " mgf root";
      result.witness = w.str();
      result.root = RootDiagnostics{brent.iterations, brent.bracket_lo,
                                    brent.bracket_hi, g(root)};
    }
  }

  if (!any_positive) {
    result.witness = "all supports are {0}";
    result.note = dists.empty() ? "empty distribution list" : "no noise needed";
  }
  return result;
}

CalibrationResult calibrate_spperp_bernoulli(double p,
                                             const PrivacyBudget& eps) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("bernoulli parameter must lie in [0, 1]");
  }
  CalibrationResult result;
  result.method = CalibrationMethod::kSpPerpBernoulli;
  if (p == 0.0) {
    result.theta = 0.0;
    result.witness = "p=0: user always reports zero";
    result.note = "no noise needed";
    return result;
  }
  result.theta =
      1.0 / std::log((std::exp(eps.epsilon) - (1.0 - p)) / p);
  std::ostringstream w;
  w << "p=" << format_double(p);
  result.witness = w.str();
  return result;
}

CalibrationResult calibrate_spq(const std::vector<DistPair>& pairs,
                                const PrivacyBudget& eps) {
  CalibrationResult result;
  result.method = CalibrationMethod::kSpqDelta;
  double best = 0.0;
  std::size_t arg = 0;
  double arg_point = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const DeltaStarReport report = delta_star(pairs[i].p, pairs[i].q);
    if (report.sup > best) {
      best = report.sup;
      arg = i;
      arg_point = report.witness;
      found = true;
    }
  }
  result.theta = best / eps.epsilon;
  if (found) {
    std::ostringstream w;
    w << "pair " << arg << " (user="
      << (pairs[arg].user_id.empty() ? "?" : pairs[arg].user_id)
      << ") sup delta*=" << format_double(best) << " at t="
      << format_double(arg_point);
    result.witness = w.str();
  } else {
    result.witness = "all pairs coincide";
    if (pairs.empty()) result.note = "empty pair list";
  }
  return result;
}

CalibrationResult calibrate_spq_bernoulli(const PrivacyBudget& eps) {
  CalibrationResult result;
  result.method = CalibrationMethod::kSpqBernoulli;
  result.theta = 1.0 / eps.epsilon;
  result.witness = "bernoulli pair: sup delta* = 1";
  return result;
}

CalibrationResult calibrate_spq_bernoulli_relaxed(const BinaryRelaxContext& ctx,
                                                  const PrivacyBudget& eps) {
  CalibrationResult result;
  result.method = CalibrationMethod::kSpqBernoulliRelaxed;
  const auto psi = ctx.psi();
  if (psi.empty()) {
    // Unreachable for a valid background; kept as the documented fallback.
    result.theta = 1.0 / eps.epsilon;
    result.witness = "no admissible point";
    result.note = "fell back to 1/epsilon";
    return result;
  }
  const double e_eps = std::exp(eps.epsilon);
  double best = 0.0;
  double arg_x = 0.0, arg_psi = 0.0;
  for (const auto& [x, value] : psi) {
    const double theta = 1.0 / std::log(e_eps + (e_eps - 1.0) * value);
    if (theta > best) {
      best = theta;
      arg_x = x;
      arg_psi = value;
    }
  }
  result.theta = best;
  std::ostringstream w;
  w << "binding x=" << format_double(arg_x)
    << " psi=" << format_double(arg_psi);
  result.witness = w.str();
  return result;
}

CalibrationResult calibrate_generic(const SystemConfig& config,
                                    const std::vector<SecretPair>& pairs,
                                    const PrivacyBudget& eps) {
  CalibrationResult result;
  result.method = CalibrationMethod::kKantorovichGeneric;
  double best = 0.0;
  std::size_t arg = 0;
  bool found = false;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const DiscreteDistribution prior1 =
        conditional_prior(config, first_arm(pairs[i]));
    const DiscreteDistribution prior2 =
        conditional_prior(config, second_arm(pairs[i]));
    const double sup = delta_star(prior1, prior2).sup;
    if (sup > best) {
      best = sup;
      arg = i;
      found = true;
    }
  }
  result.theta = best / eps.epsilon;
  if (found) {
    std::ostringstream w;
    w << "pair " << arg << " " << describe(pairs[arg])
      << " sup delta*=" << format_double(best);
    result.witness = w.str();
  } else {
    result.witness = "all pairs coincide";
    if (pairs.empty()) result.note = "empty pair list";
  }
  return result;
}

}  // namespace puffercal
