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

#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "pawsim/aligned.hpp"
#include "pawsim/error.hpp"
#include "pawsim/fft.hpp"
#include "support.hpp"

using namespace pawsim;
using cd = std::complex<double>;

namespace {

// Direct DFT over the chosen axes of a row-major 3D array.
std::vector<cd> naive_dft3(const std::vector<cd>& x, const std::size_t (&n)[3], const bool (&use)[3], int sign) {
  std::vector<cd> out(x.size());
  for (std::size_t a = 0; a < n[0]; ++a)
    for (std::size_t b = 0; b < n[1]; ++b)
      for (std::size_t c = 0; c < n[2]; ++c) {
        cd acc = 0;
        for (std::size_t i = 0; i < n[0]; ++i) {
          if (!use[0] && i != a) continue;
          for (std::size_t j = 0; j < n[1]; ++j) {
            if (!use[1] && j != b) continue;
            for (std::size_t k = 0; k < n[2]; ++k) {
              if (!use[2] && k != c) continue;
              double ph = 0;
              if (use[0]) ph += static_cast<double>(a * i) / n[0];
              if (use[1]) ph += static_cast<double>(b * j) / n[1];
              if (use[2]) ph += static_cast<double>(c * k) / n[2];
              acc += x[(i * n[1] + j) * n[2] + k] * std::polar(1.0, sign * 2 * std::numbers::pi * ph);
            }
          }
        }
        out[(a * n[1] + b) * n[2] + c] = acc;
      }
  return out;
}

double rel(const std::vector<cd>& a, const std::vector<cd>& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_SUITE("fft") {

TEST_CASE("frequency indices and wavenumbers") {
  CHECK(frequency_index(0, 4) == 0);
  CHECK(frequency_index(1, 4) == 1);
  CHECK(frequency_index(2, 4) == -2);
  CHECK(frequency_index(3, 4) == -1);
  const KGrid k = wavenumbers(Grid2D(8, 4, 1e-4, 2e-4));
  CHECK(k.kx[1] == doctest::Approx(2 * std::numbers::pi / 8e-4));
  CHECK(k.ky[3] == doctest::Approx(-2 * std::numbers::pi / 8e-4));
  CHECK(k.magnitude(1, 3) == doctest::Approx(std::hypot(k.kx[1], k.ky[3])));
  CHECK_THROWS_AS(Grid2D(5, 4), Error);
  CHECK_THROWS_AS(Grid2D(2, 2), Error);
  CHECK_THROWS_AS(Grid2D(4, 4, -1.0), Error);
  CHECK_THROWS_AS(TimeGrid(0), Error);
}

TEST_CASE("transform over an axis subset matches the direct sum") {
  const std::size_t n[3] = {3, 4, 5};
  const std::size_t shape[] = {3, 4, 5};
  const auto x = testing::random_complex(60, 1);
  const bool subsets[3][3] = {{true, false, true}, {false, true, false}, {true, true, true}};
  for (const auto& use : subsets) {
    std::vector<std::size_t> axes;
    for (std::size_t d = 0; d < 3; ++d)
      if (use[d]) axes.push_back(d);
    const auto fwd = spectral_transform(x, shape, axes, FftDirection::Forward);
    CHECK(rel(fwd, naive_dft3(x, n, use, -1)) < 1e-13);
    const auto back = spectral_transform(fwd, shape, axes, FftDirection::Inverse);
    CHECK(rel(back, x) < 1e-14);
  }
}

TEST_CASE("Parseval and conjugate symmetry of real fields") {
  const Field2D f = testing::random_field(Grid2D(8, 6), 2, -1, 1);
  const auto F = spectral_transform(f, FftDirection::Forward);
  double e_space = 0, e_freq = 0;
  for (double v : f.values()) e_space += v * v;
  for (const cd& z : F) e_freq += std::norm(z);
  CHECK(e_freq / 48.0 == doctest::Approx(e_space).epsilon(1e-13));
  for (std::size_t iy = 0; iy < 6; ++iy)
    for (std::size_t ix = 0; ix < 8; ++ix) {
      const cd a = F[iy * 8 + ix], b = F[((6 - iy) % 6) * 8 + (8 - ix) % 8];
      CHECK(std::abs(a - std::conj(b)) < 1e-12);
    }
}

TEST_CASE("delta and constant spectra") {
  Field2D delta(Grid2D(4, 4));
  delta.at(0, 0) = 1.0;
  for (const cd& z : spectral_transform(delta, FftDirection::Forward)) CHECK(std::abs(z - 1.0) < 1e-15);
  const auto c = spectral_transform(Field2D(Grid2D(4, 4), 2.0), FftDirection::Forward);
  CHECK(std::abs(c[0] - 32.0) < 1e-13);
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(std::abs(c[i]) < 1e-13);
}

TEST_CASE("space-time transform over time only") {
  const Field2D p0 = testing::random_field(Grid2D(4, 4), 3);
  SpaceTimeField f(Grid2D(4, 4), TimeGrid(3));
  for (std::size_t m = 0; m < 3; ++m)
    for (std::size_t i = 0; i < 16; ++i) f.values()[m * 16 + i] = p0.values()[i];
  const Axis t[] = {Axis::T};
  const auto F = spectral_transform(f, FftDirection::Forward, t);
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(std::abs(F[i] - 3.0 * p0.values()[i]) < 1e-13);
    CHECK(std::abs(F[16 + i]) < 1e-13);
  }
}

TEST_CASE("batched real transforms agree with the complex transform") {
  const std::vector<std::size_t> dims{4, 6, 5};
  const std::size_t shape[] = {4, 6, 5}, axes[] = {0, 1, 2};
  const std::size_t batch = 3, n = 120, h = 4 * 6 * 3;
  const auto src = testing::random_vector(batch * n, 4);

  RealFftBatch<double> fft(dims, batch);
  CHECK(fft.real_size() == n);
  CHECK(fft.complex_size() == h);
  aligned_vector<double> in(src.begin(), src.end()), out(batch * n);
  aligned_vector<cd> spec(batch * h);
  fft.forward(in.data(), spec.data());
  for (std::size_t b = 0; b < batch; ++b) {
    const std::vector<cd> x(src.begin() + b * n, src.begin() + (b + 1) * n);
    const auto full = spectral_transform(x, shape, axes, FftDirection::Forward);
    for (std::size_t i = 0; i < 24; ++i)
      for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(spec[b * h + i * 3 + k] - full[i * 5 + k]) < 1e-12);
  }
  const aligned_vector<cd> kept = spec;
  fft.inverse(spec.data(), out.data());
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] / n == doctest::Approx(src[i]).epsilon(1e-12));

  RealFftBatch<float> fft32(dims, batch);
  aligned_vector<float> in32(src.begin(), src.end()), out32(batch * n);
  aligned_vector<std::complex<float>> spec32(batch * h);
  fft32.forward(in32.data(), spec32.data());
  for (std::size_t i = 0; i < kept.size(); ++i) CHECK(std::abs(std::complex<double>(spec32[i]) - kept[i]) < 1e-4);
}

TEST_CASE("transform input checks") {
  const std::vector<cd> x(6);
  const std::size_t shape[] = {2, 3};
  const std::size_t twice[] = {1, 1}, out_of_range[] = {2}, ok[] = {0};
  CHECK_THROWS_AS(spectral_transform(x, shape, twice, FftDirection::Forward), Error);
  CHECK_THROWS_AS(spectral_transform(x, shape, out_of_range, FftDirection::Forward), Error);
  const std::size_t wrong[] = {2, 2};
  CHECK_THROWS_AS(spectral_transform(x, wrong, ok, FftDirection::Forward), Error);
  RealFftBatch<double> fft({4}, 1);
  aligned_vector<double> in(8);
  aligned_vector<cd> out(4);
  CHECK_THROWS_AS(fft.forward(in.data() + 1, out.data()), Error);
}

}  // TEST_SUITE
