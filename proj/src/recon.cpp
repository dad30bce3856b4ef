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

#include "pawsim/recon.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pawsim/error.hpp"

namespace pawsim {

void SsimParams::validate() const {
  require(window >= 1 && window % 2 == 1, "SSIM window must be odd and positive");
  require(sigma > 0 && k1 > 0 && k2 > 0 && dynamic_range > 0, "SSIM constants must be positive");
}

double mse(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "mse operands differ in size");
  require(!a.empty(), "mse of empty arrays");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

double mse(const Field2D& a, const Field2D& b) {
  require(a.grid().nx() == b.grid().nx() && a.grid().ny() == b.grid().ny(), "mse fields differ in shape");
  return mse(a.values(), b.values());
}

double mse(const SpaceTimeField& a, const SpaceTimeField& b) {
  require(a.grid().nx() == b.grid().nx() && a.grid().ny() == b.grid().ny() && a.nt() == b.nt(),
          "mse fields differ in shape");
  return mse(a.values(), b.values());
}

namespace {

std::vector<double> gaussian_taps(std::size_t n, double sigma) {
  std::vector<double> g(n);
  const double c = 0.5 * static_cast<double>(n - 1);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(i) - c;
    g[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    total += g[i];
  }
  for (double& v : g) v /= total;
  return g;
}

// Separable valid-region filter of a row-major w x h image.
std::vector<double> filter_valid(const std::vector<double>& img, std::size_t w, std::size_t h,
                                 const std::vector<double>& g) {
  const std::size_t n = g.size();
  const std::size_t ow = w - n + 1;
  const std::size_t oh = h - n + 1;
  std::vector<double> rows(h * ow);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += g[k] * img[y * w + x + k];
      rows[y * ow + x] = acc;
    }
  }
  std::vector<double> out(oh * ow);
  for (std::size_t y = 0; y < oh; ++y) {
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += g[k] * rows[(y + k) * ow + x];
      out[y * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

double ssim(const Field2D& a, const Field2D& b, const SsimParams& params) {
  params.validate();
  const std::size_t w = a.grid().nx();
  const std::size_t h = a.grid().ny();
  require(w == b.grid().nx() && h == b.grid().ny(), "ssim images differ in shape");
  require(w >= params.window && h >= params.window, "ssim image is smaller than the window");

  const std::vector<double> g = gaussian_taps(params.window, params.sigma);
  const std::vector<double> va(a.values().begin(), a.values().end());
  const std::vector<double> vb(b.values().begin(), b.values().end());
  std::vector<double> aa(va.size()), bb(va.size()), ab(va.size());
  for (std::size_t i = 0; i < va.size(); ++i) {
    aa[i] = va[i] * va[i];
    bb[i] = vb[i] * vb[i];
    ab[i] = va[i] * vb[i];
  }
  const auto mu_a = filter_valid(va, w, h, g);
  const auto mu_b = filter_valid(vb, w, h, g);
  const auto e_aa = filter_valid(aa, w, h, g);
  const auto e_bb = filter_valid(bb, w, h, g);
  const auto e_ab = filter_valid(ab, w, h, g);

  const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
  const double c2 = std::pow(params.k2 * params.dynamic_range, 2);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    // Every term is symmetric in (a, b), so ssim(x, x) evaluates to exactly 1.
    const double ma2 = mu_a[i] * mu_a[i];
    const double mb2 = mu_b[i] * mu_b[i];
    const double mab = mu_a[i] * mu_b[i];
    const double var_a = e_aa[i] - ma2;
    const double var_b = e_bb[i] - mb2;
    const double cov = e_ab[i] - mab;
    total += ((2.0 * mab + c1) * (2.0 * cov + c2)) / ((ma2 + mb2 + c1) * (var_a + var_b + c2));
  }
  return total / static_cast<double>(mu_a.size());
}

Normalized normalize01(const Field2D& a) {
  require(a.all_finite(), "normalize01 input contains non-finite values");
  const double lo = a.min();
  const double hi = a.max();
  if (!(hi > lo)) return {Field2D(a.grid()), true};
  Field2D out(a.grid());
  const double inv = 1.0 / (hi - lo);
  auto src = a.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = (src[i] - lo) * inv;
  return {std::move(out), false};
}

Field2D time_reversal_raw(const SensorData& sensor, const MediumParams& medium, const TimeReversalOptions& options) {
  const SensorMask& mask = sensor.mask;
  const std::size_t nt = sensor.tgrid.nt();
  require(sensor.values.size() == nt * mask.size(), "sensor data size does not match mask and time grid");
  require(options.pad_factor >= 1, "pad factor must be at least 1");
  for (double v : sensor.values) require(std::isfinite(v), "sensor data contains non-finite values");

  const PaddedDomain domain(mask.grid(), options.pad_factor);
  KSpaceStepper stepper(domain.outer(), medium, sensor.tgrid.dt());
  std::vector<std::size_t> sites;
  sites.reserve(mask.size());
  for (const SensorPixel& px : mask.pixels()) sites.push_back(domain.outer_index(px.ix, px.iy));

  const std::size_t n = domain.outer().size();
  std::vector<double> prev(n, 0.0), cur(n, 0.0), next(n, 0.0);
  auto enforce = [&](std::vector<double>& field, std::size_t m) {
    for (std::size_t s = 0; s < sites.size(); ++s) field[sites[s]] = sensor.at(m, s);
  };
  enforce(cur, nt - 1);
  for (std::size_t r = 1; r < nt; ++r) {
    stepper.step(cur, prev, next);
    enforce(next, nt - 1 - r);
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  Field2D out(mask.grid());
  domain.crop(cur, out.values());
  return out;
}

Field2D time_reversal(const SensorData& sensor, const MediumParams& medium, const TimeReversalOptions& options) {
  return normalize01(time_reversal_raw(sensor, medium, options)).field;
}

}  // namespace pawsim
