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

// End-to-end acceptance checks. Each criterion prints one line:
//   [PASS] / [FAIL] / [SKIP] criterion N: detail
// Run all criteria (no arguments) or one (argument 1..10). The exit code is
// the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "puffercal/calibrate.hpp"
#include "puffercal/dist.hpp"
#include "puffercal/ingest.hpp"
#include "puffercal/mechanism.hpp"
#include "puffercal/transport.hpp"
#include "puffercal/verify.hpp"
#include "support/fixtures.hpp"

using namespace puffercal;
using namespace puffercal::testing;

namespace {

struct Outcome {
  enum Kind { kPass, kFail, kSkip } kind = kPass;
  std::string detail;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

// 1. The worked transport plan, entry for entry, within 1e-12, under 1 ms.
Outcome criterion1() {
  const DiscreteDistribution p = prior_i();
  const DiscreteDistribution q = prior_j();
  kantorovich_plan(p, q);  // warm-up outside the timed run
  const auto start = std::chrono::steady_clock::now();
  const TransportPlan plan = kantorovich_plan(p, q);
  const double ms = elapsed_ms(start);

  const std::map<std::pair<double, double>, double> expected{
      {{1, 2}, 0.075}, {{1, 3}, 0.125}, {{2, 3}, 0.225}, {{3, 3}, 0.150},
      {{3, 4}, 0.225}, {{3, 5}, 0.125}, {{4, 5}, 0.075}};
  if (plan.entries().size() != expected.size()) {
    return {Outcome::kFail,
            "expected 7 entries, got " + std::to_string(plan.entries().size())};
  }
  for (const PlanEntry& e : plan.entries()) {
    const auto it = expected.find({e.x, e.x_prime});
    if (it == expected.end()) {
      return {Outcome::kFail, "unexpected entry (" + fmt(e.x) + "," +
                                  fmt(e.x_prime) + ")"};
    }
    if (std::abs(e.mass - it->second) > 1e-12) {
      return {Outcome::kFail, "mass at (" + fmt(e.x) + "," + fmt(e.x_prime) +
                                  ") = " + fmt(e.mass) + ", expected " +
                                  fmt(it->second)};
    }
  }
  if (ms >= 1.0) {
    return {Outcome::kFail, "plan construction took " + fmt(ms) + " ms"};
  }
  return {Outcome::kPass,
          "7 entries match to 1e-12, built in " + fmt(ms) + " ms"};
}

// 2. Delta-star shortcut on the same pair, equal to the plan distance.
Outcome criterion2() {
  const DeltaStarReport report = delta_star(prior_i(), prior_j());
  const std::map<double, double> per(report.per_point.begin(),
                                     report.per_point.end());
  if (per.find(1.0) == per.end() || per.at(1.0) != 2.0) {
    return {Outcome::kFail, "delta*(1) != 2"};
  }
  if (per.find(5.0) == per.end() || per.at(5.0) != 0.0) {
    return {Outcome::kFail, "delta*(5) != 0"};
  }
  if (report.sup != 2.0) {
    return {Outcome::kFail, "sup = " + fmt(report.sup) + ", expected 2"};
  }
  const double plan_sup =
      max_plan_distance(kantorovich_plan(prior_i(), prior_j()));
  if (report.sup != plan_sup) {
    return {Outcome::kFail, "sup delta* " + fmt(report.sup) +
                                " != plan distance " + fmt(plan_sup)};
  }
  return {Outcome::kPass, "delta*(1)=2, delta*(5)=0, sup=2 = plan distance"};
}

// 3. Closed-form scales, each equal to the system-level route, exactly.
Outcome criterion3() {
  const SystemConfig config = four_user_config();
  const DiscreteDistribution bern_p = DiscreteDistribution::bernoulli(0.2);
  const DiscreteDistribution bern_q = DiscreteDistribution::bernoulli(0.9);
  for (double eps : {0.25, 1.0, 2.0}) {
    const PrivacyBudget budget(eps);
    struct Case {
      const char* name;
      double closed;
      double generic;
      double expected_times_eps;
    };
    const std::vector<Case> cases{
        {"sab(5,3)", calibrate_sab({{"u4", 5, 3}}, budget).theta,
         calibrate_generic(config, {ValuePair{"u4", 5, 3}}, budget).theta, 2},
        {"saperp(5)", calibrate_saperp({{"u4", 5}}, budget).theta,
         calibrate_generic(config, {ValueAbsent{"u4", 5}}, budget).theta, 5},
        {"spperp-max(P4)", calibrate_spperp_max({p4()}, budget).theta,
         calibrate_generic(config, {DistAbsent{"u4", p4()}}, budget).theta, 5},
        {"spq(P4,Q4)", calibrate_spq({{"u4", p4(), q4()}}, budget).theta,
         calibrate_generic(config, {DistPair{"u4", p4(), q4()}}, budget).theta,
         2},
        {"spq-bernoulli", calibrate_spq_bernoulli(budget).theta,
         calibrate_generic(config, {DistPair{"u4", bern_p, bern_q}}, budget)
             .theta,
         1},
    };
    for (const Case& c : cases) {
      if (c.closed != c.expected_times_eps / eps) {
        return {Outcome::kFail, std::string(c.name) + " closed form " +
                                    fmt(c.closed) + " != " +
                                    fmt(c.expected_times_eps / eps)};
      }
      if (c.closed != c.generic) {
        return {Outcome::kFail, std::string(c.name) + " generic " +
                                    fmt(c.generic) + " != closed " +
                                    fmt(c.closed) + " at eps=" + fmt(eps)};
      }
    }
  }
  return {Outcome::kPass,
          "theta*eps = 2, 5, 5, 2, 1; generic route agrees exactly"};
}

// 4. The Brent-solved MGF curve at the reference points, 50-point sweep
// timing.
Outcome criterion4() {
  const double at_01 = calibrate_spperp_mgf({p4()}, PrivacyBudget(0.1)).theta;
  if (std::abs(at_01 - 30.5560385) > 1e-5) {
    return {Outcome::kFail, "theta(0.1) = " + fmt(at_01)};
  }
  const double at_1 = calibrate_spperp_mgf({p4()}, PrivacyBudget(1.0)).theta;
  if (std::abs(at_1 - 3.4697696) > 1e-5) {
    return {Outcome::kFail, "theta(1.0) = " + fmt(at_1)};
  }
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 50; ++i) {
    const double eps = 0.1 + 0.9 * static_cast<double>(i) / 49.0;
    calibrate_spperp_mgf({p4()}, PrivacyBudget(eps));
  }
  const double ms = elapsed_ms(start);
  if (ms >= 100.0) {
    return {Outcome::kFail, "50-point sweep took " + fmt(ms) + " ms"};
  }
  return {Outcome::kPass, "theta(0.1)=" + fmt(at_01) + ", theta(1.0)=" +
                              fmt(at_1) + ", sweep " + fmt(ms) + " ms"};
}

// 5. Relaxed Bernoulli curve against its reference values. The sweep bound
// theta <= 1/eps is also required. The reference values are not reproducible
// from the relaxed condition on this background (they fail the exact ratio
// check itself); this criterion reports the discrepancy rather than hide it.
Outcome criterion5() {
  const DiscreteDistribution bg =
      convolve(convolve(user1(), user2()), user3());
  const BinaryRelaxContext ctx(0.2, 0.9, bg);

  bool below_bound = true;
  for (int i = 0; i < 50; ++i) {
    const double eps = 0.001 + (0.04 - 0.001) * static_cast<double>(i) / 49.0;
    const double theta =
        calibrate_spq_bernoulli_relaxed(ctx, PrivacyBudget(eps)).theta;
    if (theta > 1.0 / eps + 1e-12) below_bound = false;
  }

  const double at_04 =
      calibrate_spq_bernoulli_relaxed(ctx, PrivacyBudget(0.04)).theta;
  const double at_001 =
      calibrate_spq_bernoulli_relaxed(ctx, PrivacyBudget(0.001)).theta;
  std::string detail = "theta(0.04)=" + fmt(at_04) + " (reference 15.78399), " +
                       "theta(0.001)=" + fmt(at_001) +
                       " (reference 624.15488); theta <= 1/eps " +
                       (below_bound ? "holds" : "violated");
  const bool match = std::abs(at_04 - 15.7839907) <= 1e-4 &&
                     std::abs(at_001 - 624.1548772) <= 1e-4;
  if (match && below_bound) return {Outcome::kPass, detail};
  return {Outcome::kFail, detail};
}

// 6. Verifier soundness across randomized systems and all four families.
Outcome criterion6() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(0xACCE97);
  std::uniform_real_distribution<double> eps_draw(0.05, 3.0);
  std::uniform_real_distribution<double> param(0.05, 0.95);
  int verified = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const SystemConfig config = random_config(rng, 5, 6, trial % 3 == 0);
    const std::string id = config.users().front().id;
    const DiscreteDistribution& own = config.users().front().distribution;
    const PrivacyBudget eps(eps_draw(rng));
    std::uniform_int_distribution<std::size_t> pick(0, own.size() - 1);
    const double a = own.support()[pick(rng)];
    const double b = own.support()[pick(rng)];
    const DiscreteDistribution other =
        random_distribution(rng, 4, trial % 3 == 0);

    struct Case {
      SecretPair pair;
      double theta;
    };
    std::vector<Case> cases{
        {ValuePair{id, a, b}, calibrate_sab({{id, a, b}}, eps).theta},
        {ValueAbsent{id, a}, calibrate_saperp({{id, a}}, eps).theta},
        {DistAbsent{id, own}, calibrate_spperp_max({own}, eps).theta},
        {DistAbsent{id, own}, calibrate_spperp_mgf({own}, eps).theta},
        {DistPair{id, own, other},
         calibrate_spq({{id, own, other}}, eps).theta},
    };
    const double pp = param(rng), qq = param(rng);
    if (std::abs(pp - qq) > 1e-3) {
      const SecretPair bern_pair =
          DistPair{id, DiscreteDistribution::bernoulli(pp),
                   DiscreteDistribution::bernoulli(qq)};
      cases.push_back({bern_pair, calibrate_spq_bernoulli(eps).theta});
      cases.push_back(
          {bern_pair,
           calibrate_spq_bernoulli_relaxed({pp, qq, background_sum(config, id)},
                                           eps)
               .theta});
    }
    for (const Case& c : cases) {
      if (c.theta == 0.0) continue;  // degenerate pair, arms identical
      const VerificationReport report = verify_pair(config, c.pair, c.theta, eps);
      if (report.max_abs_log_ratio > eps.epsilon + 1e-9) {
        return {Outcome::kFail,
                "violation at trial " + std::to_string(trial) + " (" +
                    describe(c.pair) + "): ratio " +
                    fmt(report.max_abs_log_ratio) + " > eps " +
                    fmt(eps.epsilon)};
      }
      ++verified;
    }
  }
  const double ms = elapsed_ms(start);
  if (ms >= 30000.0) {
    return {Outcome::kFail, "soundness sweep took " + fmt(ms) + " ms"};
  }
  return {Outcome::kPass, std::to_string(verified) +
                              " verifications satisfied in " + fmt(ms) + " ms"};
}

// 7. Tightness on point-mass pairs: the bound is met with equality.
Outcome criterion7() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> v(-10.0, 10.0);
  std::uniform_real_distribution<double> eps_draw(0.1, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = v(rng);
    double b = v(rng);
    if (a == b) b += 0.5;
    const double eps = eps_draw(rng);
    const double theta = calibrate_sab({{"u", a, b}}, PrivacyBudget(eps)).theta;
    const LaplaceNoise noise(theta);
    const VerificationReport report = worst_case_log_ratio(
        output_density(DiscreteDistribution::point_mass(a), noise),
        output_density(DiscreteDistribution::point_mass(b), noise),
        PrivacyBudget(eps));
    if (std::abs(report.max_abs_log_ratio - std::abs(a - b) / theta) > 1e-12) {
      return {Outcome::kFail,
              "ratio " + fmt(report.max_abs_log_ratio) + " != |a-b|/theta " +
                  fmt(std::abs(a - b) / theta)};
    }
    if (std::abs(report.max_abs_log_ratio - eps) > 1e-12) {
      return {Outcome::kFail, "closed-form scale not tight: ratio " +
                                  fmt(report.max_abs_log_ratio) + " vs eps " +
                                  fmt(eps)};
    }
  }
  return {Outcome::kPass,
          "200 point-mass pairs attain |a-b|/theta = eps to 1e-12"};
}

// 8. Relaxation orderings and the Bernoulli closed form.
Outcome criterion8() {
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> eps_draw(0.05, 3.0);
  std::uniform_real_distribution<double> p_draw(0.05, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const DiscreteDistribution d = random_distribution(rng, 5, trial % 2 == 0);
    const PrivacyBudget eps(eps_draw(rng));
    const double relaxed = calibrate_spperp_mgf({d}, eps).theta;
    const double coarse = calibrate_spperp_max({d}, eps).theta;
    if (relaxed > coarse * (1.0 + 1e-12)) {
      return {Outcome::kFail, "mgf " + fmt(relaxed) + " > max " + fmt(coarse)};
    }
    bool distinct = false;
    for (std::size_t i = 1; i < d.size(); ++i) {
      if (std::abs(std::abs(d.support()[i]) - std::abs(d.support()[0])) >
          1e-9) {
        distinct = true;
        break;
      }
    }
    if (distinct && !(relaxed < coarse)) {
      return {Outcome::kFail, "no strict improvement on a two-level support"};
    }

    const double p = p_draw(rng);
    const double closed =
        calibrate_spperp_bernoulli(p, eps).theta;
    const double via_root =
        calibrate_spperp_mgf({DiscreteDistribution::bernoulli(p)}, eps).theta;
    if (std::abs(closed - via_root) > 1e-9) {
      return {Outcome::kFail, "bernoulli closed form " + fmt(closed) +
                                  " vs mgf root " + fmt(via_root)};
    }
  }
  return {Outcome::kPass,
          "500 draws: mgf <= max (strict when applicable), closed form = root"};
}

// 9. Presence probabilities cannot influence any calibrated scale.
Outcome criterion9() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> eps_draw(0.05, 3.0);
  std::uniform_real_distribution<double> zeta(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const SystemConfig config = random_config(rng, 5, 6, trial % 2 == 0);
    std::vector<UserSpec> perturbed;
    for (const UserSpec& u : config.users()) {
      perturbed.emplace_back(u.id, zeta(rng), u.distribution);
    }
    const SystemConfig other(std::move(perturbed));
    const PrivacyBudget eps(eps_draw(rng));
    const std::string id = config.users().front().id;
    const double a = config.users().front().distribution.support().front();
    const DiscreteDistribution mix = random_distribution(rng, 3, trial % 2 == 0);
    const std::vector<SecretPair> pairs{
        ValuePair{id, a, a + 1}, ValueAbsent{id, a}, DistAbsent{id, mix},
        DistPair{id, mix, mix.shifted(1.0)}};
    for (const SecretPair& pair : pairs) {
      const double t1 = calibrate_generic(config, {pair}, eps).theta;
      const double t2 = calibrate_generic(other, {pair}, eps).theta;
      if (std::memcmp(&t1, &t2, sizeof(double)) != 0) {
        return {Outcome::kFail, "theta changed with presence probabilities"};
      }
    }
  }
  return {Outcome::kPass, "800 calibrations bit-identical under zeta changes"};
}

// 10. Optional: the adult-dataset endpoints. Needs a local headered CSV,
// named via PUFFERCAL_ADULT_CSV.
Outcome criterion10() {
  const char* path = std::getenv("PUFFERCAL_ADULT_CSV");
  if (path == nullptr || std::strlen(path) == 0) {
    return {Outcome::kSkip,
            "set PUFFERCAL_ADULT_CSV to a headered adult.csv to enable"};
  }
  CategoryCodec codec("education");
  const ExtractResult extracted = extract_conditional(
      path, ConditionalQuery("education", {{"race", "White"}}), codec);
  const double coarse =
      calibrate_spperp_max({extracted.distribution}, PrivacyBudget(0.1)).theta;
  const double relaxed =
      calibrate_spperp_mgf({extracted.distribution}, PrivacyBudget(0.1)).theta;
  std::string detail = "theta_max(0.1)=" + fmt(coarse) +
                       " (reference 160), theta_mgf(0.1)=" + fmt(relaxed) +
                       " (reference 46.63)";
  if (std::abs(coarse - 160.0) > 1e-9 || std::abs(relaxed - 46.63) > 0.5) {
    return {Outcome::kFail, detail};
  }
  return {Outcome::kPass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  using Criterion = Outcome (*)();
  const std::vector<std::pair<std::string, Criterion>> criteria{
      {"transport regression (worked plan, 1e-12, <1ms)", criterion1},
      {"delta-star shortcut matches the plan", criterion2},
      {"closed-form calibrations, generic cross-check", criterion3},
      {"Brent mgf curve endpoints, sweep <0.1s", criterion4},
      {"relaxed binary curve vs reference values", criterion5},
      {"verifier soundness, 500 randomized systems, <30s", criterion6},
      {"verifier tightness on point-mass pairs", criterion7},
      {"relaxation orderings and Bernoulli closed form", criterion8},
      {"presence-probability independence, bit-identical", criterion9},
      {"adult dataset endpoints (optional)", criterion10},
  };

  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > static_cast<int>(criteria.size())) {
      std::cerr << "usage: " << argv[0] << " [1.." << criteria.size() << "]\n";
      return 64;
    }
  }

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {Outcome::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = outcome.kind == Outcome::kPass   ? "[PASS]"
                      : outcome.kind == Outcome::kSkip ? "[SKIP]"
                                                       : "[FAIL]";
    std::cout << tag << " criterion " << (i + 1) << ": " << criteria[i].first
              << " -- " << outcome.detail << "\n";
    if (outcome.kind == Outcome::kFail) ++failures;
  }
  return failures;
}
