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
#include <numbers>

#include "doctest.h"
#include "oracles/naive_fno.hpp"
#include "pawsim/error.hpp"
#include "pawsim/fno.hpp"
#include "support.hpp"

using namespace pawsim;

namespace {

FnoConfig small_config(std::size_t width, std::size_t mx, std::size_t my, std::size_t mt) {
  FnoConfig c;
  c.modes_x = mx;
  c.modes_y = my;
  c.modes_t = mt;
  c.width = width;
  return c;
}

std::vector<double> input_values(std::size_t nx, std::size_t ny, std::size_t nt, std::uint64_t seed) {
  const Grid2D g(nx, ny);
  return build_input(testing::random_field(g, seed), TimeGrid(nt)).values;
}

// Real signal whose spectrum lies inside the symmetric part of the retained band.
std::vector<double> band_limited(const FeatureShape& s, const FnoConfig& c, std::uint64_t seed) {
  CounterRng rng(seed, 5);
  std::vector<double> v(s.points(), 0.0);
  const long mx = static_cast<long>(c.modes_x) - 1, my = static_cast<long>(c.modes_y) - 1,
             mt = static_cast<long>(c.modes_t) - 1;
  for (long fx = -mx; fx <= mx; ++fx)
    for (long fy = -my; fy <= my; ++fy)
      for (long ft = 0; ft <= mt; ++ft) {
        const double amp = rng.uniform(-1.0, 1.0);
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        for (std::size_t iy = 0; iy < s.ny; ++iy)
          for (std::size_t ix = 0; ix < s.nx; ++ix)
            for (std::size_t it = 0; it < s.nt; ++it) {
              const double arg = 2.0 * std::numbers::pi *
                                 (static_cast<double>(fx * static_cast<long>(ix)) / s.nx +
                                  static_cast<double>(fy * static_cast<long>(iy)) / s.ny +
                                  static_cast<double>(ft * static_cast<long>(it)) / s.nt);
              v[(iy * s.nx + ix) * s.nt + it] += amp * std::cos(arg + phase);
            }
      }
  return v;
}

std::vector<double> shifted(const std::vector<double>& v, std::size_t channels, const FeatureShape& s,
                            std::size_t dx, std::size_t dy, std::size_t dt) {
  std::vector<double> out(v.size());
  for (std::size_t c = 0; c < channels; ++c)
    for (std::size_t iy = 0; iy < s.ny; ++iy)
      for (std::size_t ix = 0; ix < s.nx; ++ix)
        for (std::size_t it = 0; it < s.nt; ++it) {
          const std::size_t src = ((c * s.ny + iy) * s.nx + ix) * s.nt + it;
          const std::size_t dst =
              ((c * s.ny + (iy + dy) % s.ny) * s.nx + (ix + dx) % s.nx) * s.nt + (it + dt) % s.nt;
          out[dst] = v[src];
        }
  return out;
}

}  // namespace

TEST_SUITE("fno") {
  TEST_CASE("configuration rejects modes beyond the representable band") {
    FnoConfig c = small_config(2, 4, 4, 2);
    CHECK_NOTHROW(c.validate_for(8, 8, 4));
    CHECK_THROWS_AS(small_config(2, 5, 4, 2).validate_for(8, 8, 4), Error);
    CHECK_THROWS_AS(small_config(2, 4, 5, 2).validate_for(8, 8, 4), Error);
    CHECK_THROWS_AS(small_config(2, 4, 4, 3).validate_for(8, 8, 4), Error);
    CHECK_THROWS_AS(small_config(0, 1, 1, 1).validate(), Error);
    CHECK_THROWS_AS(small_config(2, 0, 1, 1).validate(), Error);
  }

  TEST_CASE("build_input broadcasts p0 and encodes coordinates") {
    const Grid2D g(8, 6);
    const TimeGrid tg(5);
    const Field2D p0 = testing::random_field(g, 3);
    const InputTensor in = build_input(p0, tg);
    REQUIRE(in.values.size() == 4 * 8 * 6 * 5);
    for (std::size_t iy = 0; iy < 6; ++iy)
      for (std::size_t ix = 0; ix < 8; ++ix)
        for (std::size_t m = 0; m < 5; ++m) {
          CHECK(in.at(0, ix, iy, m) == p0.at(ix, iy));
          CHECK(in.at(1, ix, iy, m) == static_cast<double>(ix) / 8.0);
          CHECK(in.at(2, ix, iy, m) == static_cast<double>(iy) / 6.0);
          CHECK(in.at(3, ix, iy, m) == static_cast<double>(m) / 5.0);
        }

    const InputTensor zero = build_input(Field2D(g), tg);
    for (std::size_t m = 0; m < 5; ++m) CHECK(zero.at(0, 3, 2, m) == 0.0);
    CHECK(zero.at(3, 3, 2, 4) == in.at(3, 3, 2, 4));
  }

  TEST_CASE("zero spectral weights give a zero output") {
    const FnoConfig c = small_config(2, 2, 2, 2);
    const FeatureShape s{8, 8, 4};
    const auto v = testing::random_vector(2 * s.points(), 1);
    const std::vector<std::complex<double>> r(4 * c.mode_count());
    for (double x : spectral_conv<double>(v, r, c, s)) CHECK(x == 0.0);
  }

  TEST_CASE("unit weights act as the identity on band-limited input") {
    const FnoConfig c = small_config(1, 3, 2, 2);
    const FeatureShape s{8, 8, 6};
    const auto v = band_limited(s, c, 11);
    const std::vector<std::complex<double>> r(c.mode_count(), 1.0);
    const auto out = spectral_conv<double>(v, r, c, s);
    CHECK(testing::relative_l2(out, v) <= 1e-10);
  }

  TEST_CASE("spectral_conv matches the direct DFT reference") {
    const FnoConfig c = small_config(2, 2, 2, 2);
    const FeatureShape s{8, 8, 4};
    const oracle::Shape3 os{8, 8, 4};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto v = testing::random_vector(2 * s.points(), seed);
      const auto r = testing::random_complex(4 * c.mode_count(), seed + 100);
      double imag = 0.0;
      const auto want = oracle::spectral_conv(v, r, c, os, &imag);
      const auto got = spectral_conv<double>(v, r, c, s);
      CHECK(testing::relative_l2(got, want) <= 1e-8);
      CHECK(imag <= 1e-10 * testing::max_abs(want));
    }
  }

  TEST_CASE("spectral_conv handles full-band modes and odd frame counts") {
    const FnoConfig c = small_config(2, 2, 1, 2);
    const FeatureShape s{4, 6, 5};
    const oracle::Shape3 os{4, 6, 5};
    const auto v = testing::random_vector(2 * s.points(), 9);
    const auto r = testing::random_complex(4 * c.mode_count(), 10);
    CHECK(testing::relative_l2(spectral_conv<double>(v, r, c, s), oracle::spectral_conv(v, r, c, os)) <= 1e-10);
  }

  TEST_CASE("spectral_conv is linear") {
    const FnoConfig c = small_config(3, 2, 3, 2);
    const FeatureShape s{8, 8, 4};
    const auto v = testing::random_vector(3 * s.points(), 21);
    const auto w = testing::random_vector(3 * s.points(), 22);
    const auto r = testing::random_complex(9 * c.mode_count(), 23);
    const double a = 1.7, b = -0.3;
    std::vector<double> mix(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mix[i] = a * v[i] + b * w[i];
    const auto fv = spectral_conv<double>(v, r, c, s);
    const auto fw = spectral_conv<double>(w, r, c, s);
    const auto fm = spectral_conv<double>(mix, r, c, s);
    std::vector<double> want(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) want[i] = a * fv[i] + b * fw[i];
    CHECK(testing::relative_l2(fm, want) <= 1e-10);
  }

  TEST_CASE("spectral_conv commutes with circular shifts") {
    const FnoConfig c = small_config(2, 3, 2, 2);
    const FeatureShape s{8, 8, 6};
    const auto v = testing::random_vector(2 * s.points(), 31);
    const auto r = testing::random_complex(4 * c.mode_count(), 32);
    const auto base = spectral_conv<double>(v, r, c, s);
    for (auto [dx, dy, dt] : {std::array<std::size_t, 3>{1, 0, 0}, {0, 3, 0}, {0, 0, 2}, {5, 7, 1}}) {
      const auto out = spectral_conv<double>(shifted(v, 2, s, dx, dy, dt), r, c, s);
      CHECK(testing::relative_l2(out, shifted(base, 2, s, dx, dy, dt)) <= 1e-10);
    }
  }

  TEST_CASE("fourier_layer examples") {
    const FnoConfig c = small_config(2, 2, 2, 2);
    const FeatureShape s{8, 8, 4};
    const std::size_t n = s.points();
    const auto v = testing::random_vector(2 * n, 41);
    FnoLayer<double> layer{std::vector<std::complex<double>>(4 * c.mode_count()), {1, 0, 0, 1}, {0, 0}};
    const auto relu_v = fourier_layer<double>(v, layer, c, s);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(relu_v[i] == std::max(v[i], 0.0));

    layer.w = {0, 0, 0, 0};
    layer.b = {-1, -1};
    for (double x : fourier_layer<double>(v, layer, c, s)) CHECK(x == 0.0);

    const auto p = testing::random_params(c, 42);
    const auto out = fourier_layer<double>(v, p.layers[0], c, s);
    for (double x : out) CHECK(x >= 0.0);
    const auto want = oracle::fourier_layer(v, p.layers[0], c, oracle::Shape3{8, 8, 4});
    CHECK(testing::relative_l2(out, want) <= 1e-10);
    CHECK_THROWS_AS(fourier_layer<double>(v, FnoLayer<double>{layer.r, {1, 0}, {0, 0}}, c, s), Error);
  }

  TEST_CASE("forward with all-zero parameters is zero") {
    const FnoConfig c = small_config(2, 2, 2, 2);
    const Grid2D g(8, 8);
    const TimeGrid tg(4);
    const auto in = build_input(testing::random_field(g, 5), tg);
    const SpaceTimeField out = forward(FnoParams<double>::zeros(c), in, g, tg);
    for (double x : out.values()) CHECK(x == 0.0);

    auto p = FnoParams<double>::zeros(c);
    for (std::size_t ch = 0; ch < 2; ++ch) p.lift_w[ch * 4 + ch] = 1.0;
    p.proj_w = {1.0, 1.0};
    for (double x : forward(p, in, g, tg).values()) CHECK(x == 0.0);
  }

  TEST_CASE("forward matches the loop-by-loop reference") {
    const FnoConfig c = small_config(3, 2, 2, 2);
    const Grid2D g(8, 8);
    const TimeGrid tg(4);
    const oracle::Shape3 os{8, 8, 4};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto p = init_params<double>(c, seed);
      const auto in = build_input(testing::random_field(g, seed + 50), tg);
      const auto want = oracle::forward(p, in.values, os);
      const auto got = to_feature_layout<double>(forward(p, in, g, tg));
      CHECK(testing::relative_l2(got, want) <= 1e-8);
    }
  }

  TEST_CASE("forward is deterministic and single precision tracks double") {
    const FnoConfig c = small_config(4, 3, 3, 2);
    const Grid2D g(8, 8);
    const TimeGrid tg(6);
    const auto p = init_params<double>(c, 7);
    const auto in = build_input(testing::random_field(g, 8), tg);
    const auto a = forward(p, in, g, tg);
    const auto b = forward(p, in, g, tg);
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    const auto f = forward(cast_params<float>(p), in, g, tg);
    CHECK(testing::relative_l2(f.values(), a.values()) <= 1e-5);
  }

  TEST_CASE("weights transfer to a finer grid") {
    const FnoConfig c = small_config(3, 2, 2, 2);
    const auto p = init_params<double>(c, 12);
    const Grid2D g(16, 16);
    const TimeGrid tg(8);
    const auto out = forward(p, build_input(testing::random_field(g, 13), tg), g, tg);
    CHECK(out.all_finite());
    CHECK(out.grid().nx() == 16);
    CHECK(out.nt() == 8);
  }

  TEST_CASE("non-finite activations name the failing layer") {
    const FnoConfig c = small_config(2, 2, 2, 2);
    const Grid2D g(8, 8);
    const TimeGrid tg(4);
    const auto in = build_input(testing::random_field(g, 5), tg);
    auto p = init_params<double>(c, 3);
    p.layers[1].b[0] = std::numeric_limits<double>::infinity();
    try {
      forward(p, in, g, tg);
      FAIL("expected a numerical failure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NumericalFailure);
      CHECK(std::string(e.what()).find("layer2") != std::string::npos);
    }
  }

  TEST_CASE("parameter tensors follow the declared order and shapes") {
    const FnoConfig c = small_config(2, 1, 1, 1);
    auto p = init_params<double>(c, 1);
    const auto t = p.tensors();
    REQUIRE(t.size() == 2 + 3 * 4 + 2);
    CHECK(t[0].name == "lift.w");
    CHECK(t[2].name == "layer1.r");
    CHECK(t[2].complex);
    CHECK(t[2].dims == std::vector<std::size_t>{2, 2, 2, 2, 1});
    CHECK(t.back().name == "proj.b");
    CHECK(p.scalar_count() == 8 + 2 + 4 * (2 * 16 + 4 + 2) + 2 + 1);
    for (const auto& z : p.layers[0].r) CHECK(std::abs(z) <= 0.25);
    for (double b : p.layers[2].b) CHECK(b == 0.0);
    for (double w : p.lift_w) CHECK(std::abs(w) <= 0.5);
  }
}
