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

// Reference kernels. Plain loops; these define the semantics that the SIMD
// variants are tested against.

#include <algorithm>
#include <type_traits>

#include "kernels/tables.hpp"

namespace pawsim::kernels::detail {

namespace {

template <class Real>
using Acc = std::conditional_t<std::is_same_v<Real, float>, double, Real>;

template <class Real>
void axpy(std::size_t n, Real a, const Real* x, Real* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

template <class Real>
Real dot(std::size_t n, const Real* x, const Real* y) {
  Acc<Real> s = 0;
  for (std::size_t i = 0; i < n; ++i) s += static_cast<Acc<Real>>(x[i]) * y[i];
  return static_cast<Real>(s);
}

template <class Real>
Real sum(std::size_t n, const Real* x) {
  Acc<Real> s = 0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return static_cast<Real>(s);
}

template <class Real>
void relu(std::size_t n, Real* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] = std::max(x[i], Real(0));
}

template <class Real>
void relu_backward(std::size_t n, const Real* a, Real* g) {
  for (std::size_t i = 0; i < n; ++i) g[i] = a[i] > Real(0) ? g[i] : Real(0);
}

// Complex helpers operate on the interleaved representation directly so the
// arithmetic order is explicit (std::complex operator* may add NaN handling).
template <class Real>
void cmac(std::size_t n, const std::complex<Real>* a, const std::complex<Real>* x, std::complex<Real>* y) {
  const Real* pa = reinterpret_cast<const Real*>(a);
  const Real* px = reinterpret_cast<const Real*>(x);
  Real* py = reinterpret_cast<Real*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    const Real ar = pa[2 * i], ai = pa[2 * i + 1], xr = px[2 * i], xi = px[2 * i + 1];
    py[2 * i] += ar * xr - ai * xi;
    py[2 * i + 1] += ar * xi + ai * xr;
  }
}

template <class Real>
void cmac_conj(std::size_t n, const std::complex<Real>* a, const std::complex<Real>* x, std::complex<Real>* y) {
  const Real* pa = reinterpret_cast<const Real*>(a);
  const Real* px = reinterpret_cast<const Real*>(x);
  Real* py = reinterpret_cast<Real*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    const Real ar = pa[2 * i], ai = pa[2 * i + 1], xr = px[2 * i], xi = px[2 * i + 1];
    py[2 * i] += ar * xr + ai * xi;
    py[2 * i + 1] += ar * xi - ai * xr;
  }
}

template <class Real>
void cmul_conj_acc(std::size_t n, const std::complex<Real>* a, const std::complex<Real>* b, std::complex<Real>* y) {
  const Real* pa = reinterpret_cast<const Real*>(a);
  const Real* pb = reinterpret_cast<const Real*>(b);
  Real* py = reinterpret_cast<Real*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    const Real ar = pa[2 * i], ai = pa[2 * i + 1], br = pb[2 * i], bi = pb[2 * i + 1];
    py[2 * i] += ar * br + ai * bi;
    py[2 * i + 1] += ai * br - ar * bi;
  }
}

template <class Real>
void scale_real(std::size_t n, const Real* s, const std::complex<Real>* x, std::complex<Real>* y) {
  const Real* px = reinterpret_cast<const Real*>(x);
  Real* py = reinterpret_cast<Real*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    py[2 * i] = s[i] * px[2 * i];
    py[2 * i + 1] = s[i] * px[2 * i + 1];
  }
}

template <class Real>
KernelTable<Real> make() noexcept {
  return {&axpy<Real>,         &dot<Real>,     &sum<Real>,           &relu<Real>,      &relu_backward<Real>,
          &cmac<Real>,         &cmac_conj<Real>, &cmul_conj_acc<Real>, &scale_real<Real>};
}

}  // namespace

KernelTable<float> scalar_table_f32() noexcept { return make<float>(); }
KernelTable<double> scalar_table_f64() noexcept { return make<double>(); }

}  // namespace pawsim::kernels::detail
