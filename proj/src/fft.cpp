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

#include "pawsim/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <tuple>

#include "pawsim/error.hpp"

namespace pawsim {

namespace {

// The FFTW planner is not reentrant; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t product(std::span<const std::size_t> v) {
  return std::accumulate(v.begin(), v.end(), std::size_t{1}, std::multiplies<>());
}

struct PlanKey {
  bool single;
  std::vector<std::size_t> dims;
  std::size_t batch;
  auto operator<=>(const PlanKey&) const = default;
};

struct PlanPair {
  void* forward;
  void* inverse;
};

template <class Real>
PlanPair make_plans(const std::vector<std::size_t>& dims, std::size_t batch) {
  std::vector<int> n(dims.begin(), dims.end());
  const int rank = static_cast<int>(n.size());
  const std::size_t real_size = product(dims);
  const std::size_t complex_size = real_size / dims.back() * (dims.back() / 2 + 1);
  const int howmany = static_cast<int>(batch);
  const int rdist = static_cast<int>(real_size);
  const int cdist = static_cast<int>(complex_size);
  if constexpr (std::is_same_v<Real, float>) {
    auto* r = static_cast<float*>(fftwf_malloc(sizeof(float) * real_size * batch));
    auto* c = static_cast<fftwf_complex*>(fftwf_malloc(sizeof(fftwf_complex) * complex_size * batch));
    PlanPair p{fftwf_plan_many_dft_r2c(rank, n.data(), howmany, r, nullptr, 1, rdist, c, nullptr, 1, cdist,
                                       FFTW_ESTIMATE),
               fftwf_plan_many_dft_c2r(rank, n.data(), howmany, c, nullptr, 1, cdist, r, nullptr, 1, rdist,
                                       FFTW_ESTIMATE)};
    fftwf_free(r);
    fftwf_free(c);
    return p;
  } else {
    auto* r = static_cast<double*>(fftw_malloc(sizeof(double) * real_size * batch));
    auto* c = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * complex_size * batch));
    PlanPair p{fftw_plan_many_dft_r2c(rank, n.data(), howmany, r, nullptr, 1, rdist, c, nullptr, 1, cdist,
                                      FFTW_ESTIMATE),
               fftw_plan_many_dft_c2r(rank, n.data(), howmany, c, nullptr, 1, cdist, r, nullptr, 1, rdist,
                                      FFTW_ESTIMATE)};
    fftw_free(r);
    fftw_free(c);
    return p;
  }
}

template <class Real>
PlanPair cached_plans(const std::vector<std::size_t>& dims, std::size_t batch) {
  static std::map<PlanKey, PlanPair> cache;
  std::lock_guard lock(planner_mutex());
  PlanKey key{std::is_same_v<Real, float>, dims, batch};
  auto it = cache.find(key);
  if (it == cache.end()) {
    PlanPair plans = make_plans<Real>(dims, batch);
    if (plans.forward == nullptr || plans.inverse == nullptr) {
      throw Error(ErrorCode::InvalidInput, "FFTW could not plan the requested transform");
    }
    it = cache.emplace(std::move(key), plans).first;
  }
  return it->second;
}

bool aligned64(const void* p) { return reinterpret_cast<std::uintptr_t>(p) % 64 == 0; }

}  // namespace

template <class Real>
RealFftBatch<Real>::RealFftBatch(std::vector<std::size_t> dims, std::size_t batch)
    : dims_(std::move(dims)), batch_(batch) {
  require(!dims_.empty() && batch_ >= 1, "real FFT needs at least one axis and one batch entry");
  require(std::all_of(dims_.begin(), dims_.end(), [](std::size_t d) { return d >= 1; }), "FFT axis of length 0");
  real_size_ = product(dims_);
  complex_size_ = real_size_ / dims_.back() * (dims_.back() / 2 + 1);
  const PlanPair plans = cached_plans<Real>(dims_, batch_);
  forward_plan_ = plans.forward;
  inverse_plan_ = plans.inverse;
}

template <class Real>
void RealFftBatch<Real>::forward(const Real* in, std::complex<Real>* out) const {
  require(aligned64(in) && aligned64(out), "FFT buffers must be 64-byte aligned");
  if constexpr (std::is_same_v<Real, float>) {
    fftwf_execute_dft_r2c(static_cast<fftwf_plan>(forward_plan_), const_cast<float*>(in),
                          reinterpret_cast<fftwf_complex*>(out));
  } else {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
  }
}

template <class Real>
void RealFftBatch<Real>::inverse(std::complex<Real>* in, Real* out) const {
  require(aligned64(in) && aligned64(out), "FFT buffers must be 64-byte aligned");
  if constexpr (std::is_same_v<Real, float>) {
    fftwf_execute_dft_c2r(static_cast<fftwf_plan>(inverse_plan_), reinterpret_cast<fftwf_complex*>(in), out);
  } else {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), reinterpret_cast<fftw_complex*>(in), out);
  }
}

template class RealFftBatch<float>;
template class RealFftBatch<double>;

std::vector<std::complex<double>> spectral_transform(std::span<const std::complex<double>> data,
                                                     std::span<const std::size_t> shape,
                                                     std::span<const std::size_t> axes, FftDirection direction) {
  require(!shape.empty(), "transform needs a non-empty shape");
  require(product(shape) == data.size(), "array has " + std::to_string(data.size()) +
                                             " elements but shape describes " + std::to_string(product(shape)));
  require(!axes.empty(), "transform needs at least one axis");
  std::vector<bool> chosen(shape.size(), false);
  for (std::size_t a : axes) {
    require(a < shape.size(), "axis " + std::to_string(a) + " out of range for rank " + std::to_string(shape.size()));
    require(!chosen[a], "axis " + std::to_string(a) + " listed twice");
    chosen[a] = true;
  }

  // Row-major strides in elements.
  std::vector<std::ptrdiff_t> stride(shape.size());
  std::ptrdiff_t s = 1;
  for (std::size_t d = shape.size(); d-- > 0;) {
    stride[d] = s;
    s *= static_cast<std::ptrdiff_t>(shape[d]);
  }
  std::vector<fftw_iodim64> dims;
  std::vector<fftw_iodim64> loops;
  for (std::size_t d = 0; d < shape.size(); ++d) {
    fftw_iodim64 io{static_cast<std::ptrdiff_t>(shape[d]), stride[d], stride[d]};
    (chosen[d] ? dims : loops).push_back(io);
  }

  std::vector<std::complex<double>> out(data.size());
  if (data.empty()) return out;
  auto* in_buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * data.size()));
  auto* out_buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * data.size()));
  const int sign = direction == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_guru64_dft(static_cast<int>(dims.size()), dims.data(), static_cast<int>(loops.size()),
                                loops.data(), in_buf, out_buf, sign, FFTW_ESTIMATE);
  }
  std::copy(data.begin(), data.end(), reinterpret_cast<std::complex<double>*>(in_buf));
  fftw_execute(plan);
  const auto* result = reinterpret_cast<const std::complex<double>*>(out_buf);
  std::copy(result, result + data.size(), out.begin());
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in_buf);
  fftw_free(out_buf);

  if (direction == FftDirection::Inverse) {
    std::size_t n = 1;
    for (std::size_t a : axes) n *= shape[a];
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : out) v *= scale;
  }
  return out;
}

std::vector<std::complex<double>> spectral_transform(const Field2D& field, FftDirection direction) {
  std::vector<std::complex<double>> data(field.values().begin(), field.values().end());
  const std::size_t shape[] = {field.grid().ny(), field.grid().nx()};
  const std::size_t axes[] = {0, 1};
  return spectral_transform(data, shape, axes, direction);
}

std::vector<std::complex<double>> spectral_transform(const SpaceTimeField& field, FftDirection direction,
                                                     std::span<const Axis> axes) {
  std::vector<std::complex<double>> data(field.values().begin(), field.values().end());
  const std::size_t shape[] = {field.nt(), field.grid().ny(), field.grid().nx()};
  std::vector<std::size_t> idx;
  for (Axis a : axes) idx.push_back(a == Axis::T ? 0 : a == Axis::Y ? 1 : 2);
  return spectral_transform(data, shape, idx, direction);
}

}  // namespace pawsim
