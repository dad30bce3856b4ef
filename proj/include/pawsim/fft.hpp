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

#include "pawsim/field.hpp"

namespace pawsim {

enum class FftDirection { Forward, Inverse };

/// Complex DFT of a dense row-major array over a subset of its axes.
/// Forward is unnormalized (e^{-i...}); inverse applies 1/N over the
/// transformed axes, so inverse(forward(x)) == x.
std::vector<std::complex<double>> spectral_transform(std::span<const std::complex<double>> data,
                                                     std::span<const std::size_t> shape,
                                                     std::span<const std::size_t> axes, FftDirection direction);

enum class Axis { X, Y, T };

/// 2D transform of a real field; result is row-major (iy, ix).
std::vector<std::complex<double>> spectral_transform(const Field2D& field, FftDirection direction);

/// Transform of a space-time field over the named axes; result keeps the
/// field's (m, iy, ix) layout.
std::vector<std::complex<double>> spectral_transform(const SpaceTimeField& field, FftDirection direction,
                                                     std::span<const Axis> axes);

/// Cached real-to-complex transforms over a batch of identically shaped
/// arrays. `dims` lists the row-major shape; the last axis is the halved one.
/// Both directions are unnormalized. Buffers passed to execute must be
/// 64-byte aligned (see aligned_vector).
template <class Real>
class RealFftBatch {
 public:
  RealFftBatch(std::vector<std::size_t> dims, std::size_t batch);

  std::size_t real_size() const noexcept { return real_size_; }
  std::size_t complex_size() const noexcept { return complex_size_; }
  std::size_t batch() const noexcept { return batch_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }

  /// in: batch * real_size reals, out: batch * complex_size complex values.
  void forward(const Real* in, std::complex<Real>* out) const;
  /// Destroys `in`.
  void inverse(std::complex<Real>* in, Real* out) const;

 private:
  std::vector<std::size_t> dims_;
  std::size_t batch_;
  std::size_t real_size_;
  std::size_t complex_size_;
  void* forward_plan_;
  void* inverse_plan_;
};

extern template class RealFftBatch<float>;
extern template class RealFftBatch<double>;

}  // namespace pawsim
