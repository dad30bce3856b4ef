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

#include "pawsim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "pawsim/error.hpp"
#include "pawsim/kernels.hpp"

namespace pawsim {

void MediumParams::validate() const {
  require(std::isfinite(c0) && c0 > 0, "sound speed must be positive");
  require(std::isfinite(rho0) && rho0 > 0, "density must be positive");
}

PaddedDomain::PaddedDomain(const Grid2D& inner, std::size_t pad_factor)
    : inner_(inner),
      outer_(inner.scaled(pad_factor)),
      off_x_((pad_factor - 1) * inner.nx() / 2),
      off_y_((pad_factor - 1) * inner.ny() / 2) {}

void PaddedDomain::embed(std::span<const double> in, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t iy = 0; iy < inner_.ny(); ++iy) {
    std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(iy * inner_.nx()), inner_.nx(),
                out.begin() + static_cast<std::ptrdiff_t>(outer_index(0, iy)));
  }
}

void PaddedDomain::crop(std::span<const double> in, std::span<double> out) const {
  for (std::size_t iy = 0; iy < inner_.ny(); ++iy) {
    std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(outer_index(0, iy)), inner_.nx(),
                out.begin() + static_cast<std::ptrdiff_t>(iy * inner_.nx()));
  }
}

std::vector<double> half_spectrum_kmag(const Grid2D& grid) {
  const KGrid k = wavenumbers(grid);
  const std::size_t hx = grid.nx() / 2 + 1;
  std::vector<double> out(grid.ny() * hx);
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    for (std::size_t ix = 0; ix < hx; ++ix) out[iy * hx + ix] = k.magnitude(ix, iy);
  }
  return out;
}

KSpaceStepper::KSpaceStepper(const Grid2D& grid, const MediumParams& medium, double dt)
    : grid_(grid), fft_({grid.ny(), grid.nx()}, 1) {
  medium.validate();
  require(std::isfinite(dt) && dt > 0, "time step must be positive");
  const std::vector<double> kmag = half_spectrum_kmag(grid);
  const double inv_n = 1.0 / static_cast<double>(grid.size());
  cos_.resize(kmag.size());
  two_cos_.resize(kmag.size());
  for (std::size_t i = 0; i < kmag.size(); ++i) {
    const double c = std::cos(medium.c0 * kmag[i] * dt);
    cos_[i] = c * inv_n;
    two_cos_[i] = 2.0 * c * inv_n;
  }
  real_buf_.resize(fft_.real_size());
  spec_buf_.resize(fft_.complex_size());
}

void KSpaceStepper::apply(std::span<const double> in, const std::vector<double>& multiplier, std::span<double> out) {
  std::copy(in.begin(), in.end(), real_buf_.begin());
  fft_.forward(real_buf_.data(), spec_buf_.data());
  kernels::table<double>().scale_real(spec_buf_.size(), multiplier.data(), spec_buf_.data(), spec_buf_.data());
  fft_.inverse(spec_buf_.data(), real_buf_.data());
  std::copy(real_buf_.begin(), real_buf_.end(), out.begin());
}

void KSpaceStepper::step(std::span<const double> cur, std::span<const double> prev, std::span<double> next) {
  require(cur.size() == grid_.size() && prev.size() == grid_.size() && next.size() == grid_.size(),
          "stepper buffers do not match the grid");
  std::copy(cur.begin(), cur.end(), real_buf_.begin());
  fft_.forward(real_buf_.data(), spec_buf_.data());
  kernels::table<double>().scale_real(spec_buf_.size(), two_cos_.data(), spec_buf_.data(), spec_buf_.data());
  fft_.inverse(spec_buf_.data(), real_buf_.data());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] = real_buf_[i] - prev[i];
}

void KSpaceStepper::half_step(std::span<const double> p, std::span<double> out) {
  require(p.size() == grid_.size() && out.size() == grid_.size(), "stepper buffers do not match the grid");
  apply(p, cos_, out);
}

namespace {

void check_inputs(const Field2D& p0, const MediumParams& medium, const PropagationOptions& options) {
  medium.validate();
  require(options.pad_factor >= 1, "pad factor must be at least 1");
  require(p0.all_finite(), "initial pressure contains non-finite values");
}

Field2D source_field(const Field2D& p0, const PropagationOptions& options) {
  return options.smooth ? smooth_source(p0) : p0;
}

// Shared state for closed-form frames: the padded spectrum and |k|.
class ExactPropagator {
 public:
  ExactPropagator(const Field2D& source, const MediumParams& medium, std::size_t pad_factor)
      : domain_(source.grid(), pad_factor),
        fft_({domain_.outer().ny(), domain_.outer().nx()}, 1),
        c0_(medium.c0),
        kmag_(half_spectrum_kmag(domain_.outer())),
        real_(fft_.real_size()),
        spectrum_(fft_.complex_size()),
        work_(fft_.complex_size()),
        multiplier_(fft_.complex_size()) {
    domain_.embed(source.values(), real_);
    fft_.forward(real_.data(), spectrum_.data());
  }

  void frame(double t, std::span<double> out) {
    const double inv_n = 1.0 / static_cast<double>(domain_.outer().size());
    for (std::size_t i = 0; i < kmag_.size(); ++i) multiplier_[i] = std::cos(c0_ * kmag_[i] * t) * inv_n;
    kernels::table<double>().scale_real(work_.size(), multiplier_.data(), spectrum_.data(), work_.data());
    fft_.inverse(work_.data(), real_.data());
    domain_.crop(real_, out);
  }

 private:
  PaddedDomain domain_;
  RealFftBatch<double> fft_;
  double c0_;
  std::vector<double> kmag_;
  aligned_vector<double> real_;
  aligned_vector<std::complex<double>> spectrum_;
  aligned_vector<std::complex<double>> work_;
  std::vector<double> multiplier_;
};

}  // namespace

Field2D exact_field_at(const Field2D& p0, const MediumParams& medium, double t, const PropagationOptions& options) {
  check_inputs(p0, medium, options);
  require(std::isfinite(t), "time must be finite");
  const Field2D source = source_field(p0, options);
  ExactPropagator prop(source, medium, options.pad_factor);
  Field2D out(p0.grid());
  prop.frame(t, out.values());
  return out;
}

SpaceTimeField exact_propagate(const Field2D& p0, const MediumParams& medium, const TimeGrid& tgrid,
                               const PropagationOptions& options) {
  check_inputs(p0, medium, options);
  const Field2D source = source_field(p0, options);
  SpaceTimeField out(p0.grid(), tgrid);
  std::copy(source.values().begin(), source.values().end(), out.frame(0).begin());
  if (tgrid.nt() == 1) return out;
  ExactPropagator prop(source, medium, options.pad_factor);
  for (std::size_t m = 1; m < tgrid.nt(); ++m) prop.frame(tgrid.time(m), out.frame(m));
  return out;
}

SpaceTimeField kspace_propagate(const Field2D& p0, const MediumParams& medium, const TimeGrid& tgrid,
                                const PropagationOptions& options) {
  check_inputs(p0, medium, options);
  const Field2D source = source_field(p0, options);
  SpaceTimeField out(p0.grid(), tgrid);
  std::copy(source.values().begin(), source.values().end(), out.frame(0).begin());
  if (tgrid.nt() == 1) return out;

  const PaddedDomain domain(p0.grid(), options.pad_factor);
  KSpaceStepper stepper(domain.outer(), medium, tgrid.dt());
  std::vector<double> prev(domain.outer().size());
  std::vector<double> cur(domain.outer().size());
  std::vector<double> next(domain.outer().size());
  domain.embed(source.values(), prev);
  stepper.half_step(prev, cur);
  domain.crop(cur, out.frame(1));
  for (std::size_t m = 2; m < tgrid.nt(); ++m) {
    stepper.step(cur, prev, next);
    std::swap(prev, cur);
    std::swap(cur, next);
    domain.crop(cur, out.frame(m));
  }
  return out;
}

double blackman_weight(long frequency, std::size_t n) noexcept {
  if (frequency == 0) return 1.0;
  const double u = 2.0 * std::numbers::pi * static_cast<double>(frequency) / static_cast<double>(n);
  return 0.42 + 0.5 * std::cos(u) + 0.08 * std::cos(2.0 * u);
}

Field2D smooth_source(const Field2D& p0) {
  require(p0.all_finite(), "source contains non-finite values");
  const Grid2D& g = p0.grid();
  const std::size_t shape[] = {g.ny(), g.nx()};
  const std::size_t axes[] = {0, 1};
  std::vector<std::complex<double>> spec = spectral_transform(p0, FftDirection::Forward);
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    const double wy = blackman_weight(frequency_index(iy, g.ny()), g.ny());
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      spec[iy * g.nx() + ix] *= wy * blackman_weight(frequency_index(ix, g.nx()), g.nx());
    }
  }
  const std::vector<std::complex<double>> back = spectral_transform(spec, shape, axes, FftDirection::Inverse);
  Field2D out(g);
  for (std::size_t i = 0; i < back.size(); ++i) out.values()[i] = back[i].real();
  return out;
}

SensorMask::SensorMask(const Grid2D& grid, std::vector<SensorPixel> pixels) : grid_(grid), pixels_(std::move(pixels)) {
  std::set<std::size_t> seen;
  for (const SensorPixel& p : pixels_) {
    require(p.ix < grid_.nx() && p.iy < grid_.ny(),
            "sensor pixel (" + std::to_string(p.ix) + ", " + std::to_string(p.iy) + ") lies outside the grid");
    require(seen.insert(p.iy * grid_.nx() + p.ix).second,
            "sensor pixel (" + std::to_string(p.ix) + ", " + std::to_string(p.iy) + ") listed twice");
  }
}

SensorData sample_sensors(const SpaceTimeField& field, const SensorMask& mask) {
  require(mask.grid() == field.grid(), "sensor mask grid differs from the field grid");
  SensorData out{std::vector<double>(field.nt() * mask.size()), mask, field.tgrid()};
  for (std::size_t m = 0; m < field.nt(); ++m) {
    for (std::size_t s = 0; s < mask.size(); ++s) {
      const SensorPixel& p = mask.pixels()[s];
      out.values[m * mask.size() + s] = field.at(p.ix, p.iy, m);
    }
  }
  return out;
}

SensorMask linear_array_mask(const Grid2D& grid, std::size_t n_sensors) {
  require(n_sensors >= 1, "linear array needs at least one sensor");
  require(n_sensors <= grid.nx(), "linear array of " + std::to_string(n_sensors) + " sensors does not fit in " +
                                      std::to_string(grid.nx()) + " columns");
  std::vector<SensorPixel> pixels;
  pixels.reserve(n_sensors);
  for (std::size_t s = 0; s < n_sensors; ++s) pixels.push_back({(2 * s + 1) * grid.nx() / (2 * n_sensors), 0});
  return SensorMask(grid, std::move(pixels));
}

SensorMask boundary_mask(const Grid2D& grid) {
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  std::vector<SensorPixel> pixels;
  pixels.reserve(2 * (nx + ny) - 4);
  for (std::size_t ix = 0; ix < nx; ++ix) pixels.push_back({ix, 0});
  for (std::size_t iy = 1; iy < ny; ++iy) pixels.push_back({nx - 1, iy});
  for (std::size_t ix = nx - 1; ix-- > 0;) pixels.push_back({ix, ny - 1});
  for (std::size_t iy = ny - 1; iy-- > 1;) pixels.push_back({0, iy});
  return SensorMask(grid, std::move(pixels));
}

}  // namespace pawsim
