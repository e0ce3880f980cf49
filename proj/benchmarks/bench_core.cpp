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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "puffercal/calibrate.hpp"
#include "puffercal/dist.hpp"
#include "puffercal/mechanism.hpp"
#include "puffercal/transport.hpp"
#include "puffercal/verify.hpp"

namespace {

using namespace puffercal;

DiscreteDistribution random_dist(std::mt19937_64& rng, std::size_t atoms) {
  std::uniform_real_distribution<double> value(-10.0, 10.0);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::vector<double> support;
  while (support.size() < atoms) support.push_back(value(rng));
  std::sort(support.begin(), support.end());
  for (std::size_t i = 1; i < support.size(); ++i) {
    if (support[i] - support[i - 1] < 1e-6) support[i] += 1e-3;
  }
  std::vector<double> mass;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) {
    mass.push_back(weight(rng));
    total += mass.back();
  }
  for (double& m : mass) m /= total;
  return DiscreteDistribution(support, mass);
}

DiscreteDistribution table3_p4() {
  return DiscreteDistribution({1, 2, 3, 4, 5}, {0.4, 0.1, 0.0, 0.1, 0.4});
}

void BM_Convolve(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const DiscreteDistribution a = random_dist(rng, n);
  const DiscreteDistribution b = random_dist(rng, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(convolve(a, b));
  }
}
BENCHMARK(BM_Convolve)->Arg(8)->Arg(32)->Arg(128);

void BM_KantorovichPlanWorkedExample(benchmark::State& state) {
  const DiscreteDistribution p({1, 2, 3, 4, 5}, {0.2, 0.225, 0.5, 0.075, 0.0});
  const DiscreteDistribution q({1, 2, 3, 4, 5}, {0.0, 0.075, 0.5, 0.225, 0.2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(kantorovich_plan(p, q));
  }
}
BENCHMARK(BM_KantorovichPlanWorkedExample);

void BM_DeltaStar(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const DiscreteDistribution p = random_dist(rng, n);
  const DiscreteDistribution q = random_dist(rng, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(delta_star(p, q));
  }
}
BENCHMARK(BM_DeltaStar)->Arg(16)->Arg(64)->Arg(256);

void BM_MgfCalibration(benchmark::State& state) {
  const std::vector<DiscreteDistribution> dists{table3_p4()};
  const PrivacyBudget eps(0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(calibrate_spperp_mgf(dists, eps));
  }
}
BENCHMARK(BM_MgfCalibration);

void BM_WorstCaseLogRatio(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const LaplaceNoise noise(2.0);
  const LaplaceMixture m1 = output_density(random_dist(rng, n), noise);
  const LaplaceMixture m2 = output_density(random_dist(rng, n), noise);
  const PrivacyBudget eps(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(worst_case_log_ratio(m1, m2, eps));
  }
}
BENCHMARK(BM_WorstCaseLogRatio)->Arg(16)->Arg(256)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
