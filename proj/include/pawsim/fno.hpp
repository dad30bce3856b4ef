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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pawsim/aligned.hpp"
#include "pawsim/fft.hpp"
#include "pawsim/field.hpp"
#include "pawsim/grid.hpp"

namespace pawsim {

struct FnoConfig {
  std::size_t modes_x = 12;
  std::size_t modes_y = 12;
  std::size_t modes_t = 8;
  std::size_t width = 8;
  std::size_t n_layers = 4;
  std::size_t in_channels = 4;
  std::size_t out_channels = 1;

  /// Structural checks only.
  void validate() const;
  /// Also checks that the retained modes fit the band of an nx x ny x nt grid.
  void validate_for(std::size_t nx, std::size_t ny, std::size_t nt) const;

  /// Retained modes per spectral weight: (2 modes_x)(2 modes_y) modes_t.
  std::size_t mode_count() const noexcept { return 4 * modes_x * modes_y * modes_t; }

  friend bool operator==(const FnoConfig&, const FnoConfig&) = default;
};

/// Spatial-temporal extent of a feature array. Features are stored channel
/// by channel, each as [iy][ix][it] with t fastest.
struct FeatureShape {
  std::size_t nx;
  std::size_t ny;
  std::size_t nt;
  std::size_t points() const noexcept { return nx * ny * nt; }
};

template <class Real>
struct FnoLayer {
  /// Spectral weights [in][out][kx][ky][kt]; kx runs over the 2 modes_x
  /// retained columns (non-negative first), likewise ky, then kt < modes_t.
  std::vector<std::complex<Real>> r;
  std::vector<Real> w;  // pointwise [out][in]
  std::vector<Real> b;  // [out]
};

/// One parameter tensor seen as a flat array of reals. Complex tensors
/// expose interleaved (re, im) pairs.
template <class Real>
struct TensorView {
  std::string name;
  std::vector<std::size_t> dims;
  bool complex;
  std::span<Real> reals;
};

template <class Real>
struct FnoParams {
  FnoConfig config;
  std::vector<Real> lift_w;  // [width][in_channels]
  std::vector<Real> lift_b;  // [width]
  std::vector<FnoLayer<Real>> layers;
  std::vector<Real> proj_w;  // [out_channels][width]
  std::vector<Real> proj_b;  // [out_channels]

  static FnoParams zeros(const FnoConfig& config);

  /// Tensors in declaration order: lift.w, lift.b, then layerN.r, layerN.w,
  /// layerN.b for each layer, then proj.w, proj.b.
  std::vector<TensorView<Real>> tensors();
  std::vector<TensorView<const Real>> tensors() const;

  /// Number of real scalars (complex entries count twice).
  std::size_t scalar_count() const;
  bool all_finite() const;
  void set_zero();
  /// Throws if any tensor's size disagrees with config.
  void check_shapes() const;
};

template <class To, class From>
FnoParams<To> cast_params(const FnoParams<From>& params);

/// Spectral weights uniform in the disc of radius 1/width^2, pointwise
/// weights uniform in +-sqrt(1/fan_in), biases zero.
template <class Real>
FnoParams<Real> init_params(const FnoConfig& config, std::uint64_t seed);

/// Network input: channel 0 is p0 repeated over t, channels 1-3 are the
/// normalised coordinates ix/nx, iy/ny, m/nt. Layout as FeatureShape.
struct InputTensor {
  FeatureShape shape;
  std::size_t channels = 4;
  std::vector<double> values;

  double at(std::size_t c, std::size_t ix, std::size_t iy, std::size_t m) const noexcept {
    return values[((c * shape.ny + iy) * shape.nx + ix) * shape.nt + m];
  }
};

InputTensor build_input(const Field2D& p0, const TimeGrid& tgrid);

/// Frame-major field to the [iy][ix][it] feature layout and back.
template <class Real>
std::vector<Real> to_feature_layout(const SpaceTimeField& field);
SpaceTimeField from_feature_layout(std::span<const double> values, const Grid2D& grid, const TimeGrid& tgrid);

/// Truncated spectral convolution over `channels` feature arrays of one shape.
template <class Real>
class SpectralConv {
 public:
  using C = std::complex<Real>;

  SpectralConv(const FnoConfig& config, const FeatureShape& shape, std::size_t channels);

  std::size_t modes() const noexcept { return modes_; }
  std::size_t channels() const noexcept { return channels_; }
  const FeatureShape& shape() const noexcept { return shape_; }

  /// Retained spectrum of every channel, channels * modes() values.
  void analyse(const Real* v, C* gathered);
  /// Inverse transform of retained coefficients (zero elsewhere), made real by
  /// Hermitian completion; channels * points values.
  void synthesise(const C* gathered, Real* out);

  /// out_o = F^-1[ sum_i R[i,o] F[v_i] ]. When `gathered` is non-null it
  /// receives the retained input spectrum.
  void apply(std::span<const C> r, const Real* v, Real* out, C* gathered = nullptr);

  /// Per-mode multiplier w/N relating coefficients of the retained band to
  /// the gradient of the real output (w = 1 on kt = 0, else 2).
  const std::vector<Real>& adjoint_scale() const noexcept { return adjoint_scale_; }

 private:
  FnoConfig config_;
  FeatureShape shape_;
  std::size_t channels_;
  std::size_t modes_;
  std::size_t half_;  // complex values per channel in the half spectrum
  RealFftBatch<Real> fft_;
  std::vector<std::size_t> offsets_;  // half-spectrum offset of each retained mode
  std::vector<std::size_t> mirror_;   // kt = 0 plane: index of -k within the plane
  std::vector<Real> adjoint_scale_;
  aligned_vector<Real> real_;
  aligned_vector<C> spec_;
  aligned_vector<C> mixed_;
  std::vector<C> plane_;
};

template <class Real>
std::vector<Real> spectral_conv(std::span<const Real> v, std::span<const std::complex<Real>> r,
                                const FnoConfig& config, const FeatureShape& shape);

/// relu( spectral_conv(v, R) + W v + b ) for width channels.
template <class Real>
std::vector<Real> fourier_layer(std::span<const Real> v, const FnoLayer<Real>& layer, const FnoConfig& config,
                                const FeatureShape& shape);

/// Forward and backward passes for one shape, keeping the activations of the
/// last forward pass. Not shareable between threads.
template <class Real>
class FnoEngine {
 public:
  FnoEngine(const FnoConfig& config, const FeatureShape& shape);

  const FeatureShape& shape() const noexcept { return shape_; }

  /// input: in_channels feature arrays; out: out_channels arrays.
  void forward(const FnoParams<Real>& params, const Real* input, Real* out);
  /// Adds gradients of sum(g_out * out) to `grads` using the activations of
  /// the preceding forward call on the same input.
  void backward(const FnoParams<Real>& params, const Real* input, const Real* g_out, FnoParams<Real>& grads);

 private:
  FnoConfig config_;
  FeatureShape shape_;
  std::size_t points_;
  SpectralConv<Real> conv_;
  std::vector<aligned_vector<Real>> acts_;            // v_0 .. v_L
  std::vector<aligned_vector<std::complex<Real>>> spectra_;  // retained F[v_l]
  aligned_vector<Real> grad_a_;
  aligned_vector<Real> grad_v_;
  aligned_vector<Real> tmp_;
  aligned_vector<std::complex<Real>> coef_;
  aligned_vector<std::complex<Real>> coef_scaled_;
  aligned_vector<std::complex<Real>> mixed_;
};

/// Single forward evaluation; the result has the input's grid and frame count.
template <class Real>
SpaceTimeField forward(const FnoParams<Real>& params, const InputTensor& input, const Grid2D& grid,
                       const TimeGrid& tgrid);

}  // namespace pawsim
