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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pawsim/aligned.hpp"
#include "pawsim/fft.hpp"
#include "pawsim/field.hpp"
#include "pawsim/grid.hpp"

namespace pawsim {

/// Homogeneous lossless medium.
struct MediumParams {
  double c0 = 1480.0;   // m/s
  double rho0 = 1000.0; // kg/m^3

  void validate() const;
};

struct PropagationOptions {
  /// The grid is embedded centred in a periodic domain `pad_factor` times
  /// larger per side and the result cropped back; 1 means plain periodic.
  std::size_t pad_factor = 2;
  /// Apply smooth_source to p0 before propagating.
  bool smooth = false;
};

/// Centred embedding of a grid into a larger periodic domain.
class PaddedDomain {
 public:
  PaddedDomain(const Grid2D& inner, std::size_t pad_factor);

  const Grid2D& inner() const noexcept { return inner_; }
  const Grid2D& outer() const noexcept { return outer_; }
  std::size_t offset_x() const noexcept { return off_x_; }
  std::size_t offset_y() const noexcept { return off_y_; }
  std::size_t outer_index(std::size_t ix, std::size_t iy) const noexcept {
    return (iy + off_y_) * outer_.nx() + ix + off_x_;
  }

  void embed(std::span<const double> inner_values, std::span<double> outer_values) const;
  void crop(std::span<const double> outer_values, std::span<double> inner_values) const;

 private:
  Grid2D inner_;
  Grid2D outer_;
  std::size_t off_x_;
  std::size_t off_y_;
};

/// One step of the exact two-step recurrence
///   p^{m+1} = F^-1[ 2 cos(c0 |k| dt) F[p^m] ] - p^{m-1}
/// on a periodic grid. Working buffers are owned, so a stepper is not
/// shareable between threads; make one per thread.
class KSpaceStepper {
 public:
  KSpaceStepper(const Grid2D& grid, const MediumParams& medium, double dt);

  const Grid2D& grid() const noexcept { return grid_; }

  /// next = step(cur, prev). `next` may alias `prev`.
  void step(std::span<const double> cur, std::span<const double> prev, std::span<double> next);
  /// F^-1[ cos(c0 |k| dt) F[p] ], the start-up step consistent with dp/dt = 0.
  void half_step(std::span<const double> p, std::span<double> out);

 private:
  void apply(std::span<const double> in, const std::vector<double>& multiplier, std::span<double> out);

  Grid2D grid_;
  RealFftBatch<double> fft_;
  std::vector<double> two_cos_;  // 2 cos(c0|k|dt) / N on the half spectrum
  std::vector<double> cos_;      // cos(c0|k|dt) / N
  aligned_vector<double> real_buf_;
  aligned_vector<std::complex<double>> spec_buf_;
};

/// |k| on the r2c half spectrum of `grid`, row-major (iy, ix <= nx/2).
std::vector<double> half_spectrum_kmag(const Grid2D& grid);

/// Field at time `t` from the closed form p^(k,t) = p^0(k) cos(c0 |k| t).
Field2D exact_field_at(const Field2D& p0, const MediumParams& medium, double t,
                       const PropagationOptions& options = {});

/// Closed-form spectral solution, frame m at t = m dt. Frame 0 is p0 (or its
/// smoothed version) copied exactly.
SpaceTimeField exact_propagate(const Field2D& p0, const MediumParams& medium, const TimeGrid& tgrid,
                               const PropagationOptions& options = {});

/// Time-stepped k-space solution (KSpaceStepper); agrees with exact_propagate
/// to rounding in a homogeneous medium.
SpaceTimeField kspace_propagate(const Field2D& p0, const MediumParams& medium, const TimeGrid& tgrid,
                                const PropagationOptions& options = {});

/// Separable Blackman window over signed frequency index, w(0) = 1 and
/// w(-n/2) = 0 on each axis.
double blackman_weight(long frequency, std::size_t n) noexcept;
Field2D smooth_source(const Field2D& p0);

struct SensorPixel {
  std::size_t ix;
  std::size_t iy;
  friend bool operator==(const SensorPixel&, const SensorPixel&) = default;
};

/// Ordered list of distinct sensor pixels inside a grid.
class SensorMask {
 public:
  SensorMask(const Grid2D& grid, std::vector<SensorPixel> pixels);

  const Grid2D& grid() const noexcept { return grid_; }
  std::span<const SensorPixel> pixels() const noexcept { return pixels_; }
  std::size_t size() const noexcept { return pixels_.size(); }

 private:
  Grid2D grid_;
  std::vector<SensorPixel> pixels_;
};

/// values[m * n_sensors + s] is the pressure at pixel s in frame m.
struct SensorData {
  std::vector<double> values;
  SensorMask mask;
  TimeGrid tgrid;

  std::size_t n_sensors() const noexcept { return mask.size(); }
  double at(std::size_t m, std::size_t s) const noexcept { return values[m * mask.size() + s]; }
};

SensorData sample_sensors(const SpaceTimeField& field, const SensorMask& mask);

/// n_sensors pixels along the top row (iy = 0), sensor s at
/// ix = floor((2s + 1) nx / (2 n_sensors)).
SensorMask linear_array_mask(const Grid2D& grid, std::size_t n_sensors);

/// Every edge pixel once, clockwise from (0, 0).
SensorMask boundary_mask(const Grid2D& grid);

}  // namespace pawsim
