/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The pawsim Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "pawsim/field.hpp"
#include "pawsim/fno.hpp"
#include "pawsim/rng.hpp"

namespace testing {

inline pawsim::Field2D random_field(const pawsim::Grid2D& grid, std::uint64_t seed, double lo = 0.0,
                                    double hi = 1.0) {
  pawsim::CounterRng rng(seed, 77);
  pawsim::Field2D f(grid);
  for (double& v : f.values()) v = rng.uniform(lo, hi);
  return f;
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  pawsim::CounterRng rng(seed, 78);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

inline std::vector<std::complex<double>> random_complex(std::size_t n, std::uint64_t seed) {
  pawsim::CounterRng rng(seed, 79);
  std::vector<std::complex<double>> v(n);
  for (auto& z : v) z = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return v;
}

/// Every parameter entry uniform in [-scale, scale], biases included.
inline pawsim::FnoParams<double> random_params(const pawsim::FnoConfig& config, std::uint64_t seed,
                                               double scale = 0.5) {
  auto p = pawsim::FnoParams<double>::zeros(config);
  pawsim::CounterRng rng(seed, 80);
  for (auto& t : p.tensors())
    for (double& x : t.reals) x = rng.uniform(-scale, scale);
  return p;
}

inline double relative_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

template <class A, class B>
double relative_l2(const A& a, const B& b) {
  return relative_l2(std::vector<double>(a.begin(), a.end()), std::vector<double>(b.begin(), b.end()));
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace testing
