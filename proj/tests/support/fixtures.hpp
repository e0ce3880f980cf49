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

#ifndef PUFFERCAL_TESTS_FIXTURES_HPP_
#define PUFFERCAL_TESTS_FIXTURES_HPP_

#include <random>
#include <string>
#include <vector>

#include "puffercal/dist.hpp"

namespace puffercal::testing {

// The worked four-user system: users one to three with fixed statistics and
// a fourth user the secret statements are about.
inline DiscreteDistribution user1() {
  return DiscreteDistribution({1, 2, 3, 4, 5}, {0.01, 0.04, 0.10, 0.20, 0.65});
}
inline DiscreteDistribution user2() {
  return DiscreteDistribution({1, 2, 3, 4, 5}, {0.70, 0.20, 0.05, 0.04, 0.01});
}
inline DiscreteDistribution user3() {
  return DiscreteDistribution({1, 2, 3, 4, 5}, {0.20, 0.20, 0.20, 0.20, 0.20});
}
// The two candidate statistics for the fourth user.
inline DiscreteDistribution p4() {
  return DiscreteDistribution({1, 2, 3, 4, 5}, {0.4, 0.1, 0.0, 0.1, 0.4});
}
inline DiscreteDistribution q4() {
  return DiscreteDistribution({1, 2, 3, 4, 5}, {0.0, 0.05, 0.9, 0.05, 0.0});
}

inline SystemConfig four_user_config() {
  std::vector<UserSpec> users;
  users.emplace_back("u1", 1.0, user1());
  users.emplace_back("u2", 1.0, user2());
  users.emplace_back("u3", 1.0, user3());
  users.emplace_back("u4", 0.75, p4());
  return SystemConfig(std::move(users));
}

// The worked transport example: two priors on {1..5} whose optimal plan has
// seven entries and sup distance two.
inline DiscreteDistribution prior_i() {
  return DiscreteDistribution({1, 2, 3, 4, 5}, {0.2, 0.225, 0.5, 0.075, 0.0});
}
inline DiscreteDistribution prior_j() {
  return DiscreteDistribution({1, 2, 3, 4, 5}, {0.0, 0.075, 0.5, 0.225, 0.2});
}

// Random distribution with `atoms` support points. Lattice supports draw
// from the integers in [-10, 10]; otherwise supports are uniform reals.
inline DiscreteDistribution random_distribution(std::mt19937_64& rng,
                                                std::size_t atoms,
                                                bool lattice,
                                                double min_mass = 0.05) {
  std::vector<double> support;
  if (lattice) {
    std::vector<int> values;
    for (int v = -10; v <= 10; ++v) values.push_back(v);
    std::shuffle(values.begin(), values.end(), rng);
    values.resize(atoms);
    std::sort(values.begin(), values.end());
    for (int v : values) support.push_back(v);
  } else {
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    while (support.size() < atoms) support.push_back(u(rng));
    std::sort(support.begin(), support.end());
    for (std::size_t i = 1; i < support.size(); ++i) {
      if (support[i] - support[i - 1] < 1e-6) support[i] += 1e-3;
    }
  }
  std::uniform_real_distribution<double> m(min_mass, 1.0);
  std::vector<double> mass;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) {
    mass.push_back(m(rng));
    total += mass.back();
  }
  for (double& v : mass) v /= total;
  return DiscreteDistribution(std::move(support), std::move(mass));
}

inline SystemConfig random_config(std::mt19937_64& rng, std::size_t max_users,
                                  std::size_t max_atoms, bool lattice) {
  std::uniform_int_distribution<std::size_t> nu(2, max_users);
  std::uniform_int_distribution<std::size_t> na(1, max_atoms);
  std::uniform_real_distribution<double> zeta(0.0, 1.0);
  const std::size_t n = nu(rng);
  std::vector<UserSpec> users;
  for (std::size_t i = 0; i < n; ++i) {
    users.emplace_back("u" + std::to_string(i + 1), zeta(rng),
                       random_distribution(rng, na(rng), lattice));
  }
  return SystemConfig(std::move(users));
}

}  // namespace puffercal::testing

#endif  // PUFFERCAL_TESTS_FIXTURES_HPP_
