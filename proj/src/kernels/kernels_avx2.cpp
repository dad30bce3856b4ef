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

// AVX2 + FMA kernels. This translation unit alone is compiled with
// -mavx2 -mfma; it must not instantiate inline library templates, since the
// linker could pick those copies for callers running on older CPUs.

#include <immintrin.h>

#include "kernels/tables.hpp"

namespace pawsim::kernels::detail {

namespace {

// ---- float, 8 lanes (4 complex) ----

void axpy_f32(std::size_t n, float a, const float* x, float* y) {
  const __m256 va = _mm256_set1_ps(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(y + i, _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

float hsum_ps(__m256 v) {
  __m128 s = _mm_add_ps(_mm256_castps256_ps128(v), _mm256_extractf128_ps(v, 1));
  s = _mm_add_ps(s, _mm_movehl_ps(s, s));
  s = _mm_add_ss(s, _mm_movehdup_ps(s));
  return _mm_cvtss_f32(s);
}

float dot_f32(std::size_t n, const float* x, const float* y) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(x + i + 8), _mm256_loadu_ps(y + i + 8), acc1);
  }
  for (; i + 8 <= n; i += 8) acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i), acc0);
  float s = hsum_ps(_mm256_add_ps(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

float sum_f32(std::size_t n, const float* x) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_add_ps(_mm256_loadu_ps(x + i), acc0);
    acc1 = _mm256_add_ps(_mm256_loadu_ps(x + i + 8), acc1);
  }
  for (; i + 8 <= n; i += 8) acc0 = _mm256_add_ps(_mm256_loadu_ps(x + i), acc0);
  float s = hsum_ps(_mm256_add_ps(acc0, acc1));
  for (; i < n; ++i) s += x[i];
  return s;
}

void relu_f32(std::size_t n, float* x) {
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  // max(0, x) returns x when x is NaN, like std::max(x, 0).
  for (; i + 8 <= n; i += 8) _mm256_storeu_ps(x + i, _mm256_max_ps(zero, _mm256_loadu_ps(x + i)));
  for (; i < n; ++i) x[i] = x[i] < 0.0f ? 0.0f : x[i];
}

void relu_backward_f32(std::size_t n, const float* a, float* g) {
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 mask = _mm256_cmp_ps(_mm256_loadu_ps(a + i), zero, _CMP_GT_OQ);
    _mm256_storeu_ps(g + i, _mm256_and_ps(_mm256_loadu_ps(g + i), mask));
  }
  for (; i < n; ++i) g[i] = a[i] > 0.0f ? g[i] : 0.0f;
}

void cmac_f32(std::size_t n, const std::complex<float>* a, const std::complex<float>* x, std::complex<float>* y) {
  const float* pa = reinterpret_cast<const float*>(a);
  const float* px = reinterpret_cast<const float*>(x);
  float* py = reinterpret_cast<float*>(y);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256 va = _mm256_loadu_ps(pa + 2 * i);
    const __m256 vx = _mm256_loadu_ps(px + 2 * i);
    const __m256 xs = _mm256_permute_ps(vx, 0xB1);
    const __m256 prod = _mm256_fmaddsub_ps(_mm256_moveldup_ps(va), vx, _mm256_mul_ps(_mm256_movehdup_ps(va), xs));
    _mm256_storeu_ps(py + 2 * i, _mm256_add_ps(_mm256_loadu_ps(py + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const float ar = pa[2 * i], ai = pa[2 * i + 1], xr = px[2 * i], xi = px[2 * i + 1];
    py[2 * i] += ar * xr - ai * xi;
    py[2 * i + 1] += ar * xi + ai * xr;
  }
}

void cmac_conj_f32(std::size_t n, const std::complex<float>* a, const std::complex<float>* x,
                   std::complex<float>* y) {
  const float* pa = reinterpret_cast<const float*>(a);
  const float* px = reinterpret_cast<const float*>(x);
  float* py = reinterpret_cast<float*>(y);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256 va = _mm256_loadu_ps(pa + 2 * i);
    const __m256 vx = _mm256_loadu_ps(px + 2 * i);
    const __m256 xs = _mm256_permute_ps(vx, 0xB1);
    const __m256 prod = _mm256_fmsubadd_ps(_mm256_moveldup_ps(va), vx, _mm256_mul_ps(_mm256_movehdup_ps(va), xs));
    _mm256_storeu_ps(py + 2 * i, _mm256_add_ps(_mm256_loadu_ps(py + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const float ar = pa[2 * i], ai = pa[2 * i + 1], xr = px[2 * i], xi = px[2 * i + 1];
    py[2 * i] += ar * xr + ai * xi;
    py[2 * i + 1] += ar * xi - ai * xr;
  }
}

void cmul_conj_acc_f32(std::size_t n, const std::complex<float>* a, const std::complex<float>* b,
                       std::complex<float>* y) {
  const float* pa = reinterpret_cast<const float*>(a);
  const float* pb = reinterpret_cast<const float*>(b);
  float* py = reinterpret_cast<float*>(y);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256 va = _mm256_loadu_ps(pa + 2 * i);
    const __m256 vb = _mm256_loadu_ps(pb + 2 * i);
    const __m256 as = _mm256_permute_ps(va, 0xB1);
    const __m256 prod = _mm256_fmsubadd_ps(_mm256_moveldup_ps(vb), va, _mm256_mul_ps(_mm256_movehdup_ps(vb), as));
    _mm256_storeu_ps(py + 2 * i, _mm256_add_ps(_mm256_loadu_ps(py + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const float ar = pa[2 * i], ai = pa[2 * i + 1], br = pb[2 * i], bi = pb[2 * i + 1];
    py[2 * i] += ar * br + ai * bi;
    py[2 * i + 1] += ai * br - ar * bi;
  }
}

void scale_real_f32(std::size_t n, const float* s, const std::complex<float>* x, std::complex<float>* y) {
  const float* px = reinterpret_cast<const float*>(x);
  float* py = reinterpret_cast<float*>(y);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128 s4 = _mm_loadu_ps(s + i);
    const __m256 sd = _mm256_set_m128(_mm_unpackhi_ps(s4, s4), _mm_unpacklo_ps(s4, s4));
    _mm256_storeu_ps(py + 2 * i, _mm256_mul_ps(sd, _mm256_loadu_ps(px + 2 * i)));
  }
  for (; i < n; ++i) {
    py[2 * i] = s[i] * px[2 * i];
    py[2 * i + 1] = s[i] * px[2 * i + 1];
  }
}

// ---- double, 4 lanes (2 complex) ----

void axpy_f64(std::size_t n, double a, const double* x, double* y) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double hsum_pd(__m256d v) {
  __m128d s = _mm_add_pd(_mm256_castpd256_pd128(v), _mm256_extractf128_pd(v, 1));
  s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
  return _mm_cvtsd_f64(s);
}

double dot_f64(std::size_t n, const double* x, const double* y) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double s = hsum_pd(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_f64(std::size_t n, const double* x) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(_mm256_loadu_pd(x + i), acc0);
    acc1 = _mm256_add_pd(_mm256_loadu_pd(x + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(_mm256_loadu_pd(x + i), acc0);
  double s = hsum_pd(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i];
  return s;
}

void relu_f64(std::size_t n, double* x) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_max_pd(zero, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] = x[i] < 0.0 ? 0.0 : x[i];
}

void relu_backward_f64(std::size_t n, const double* a, double* g) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(a + i), zero, _CMP_GT_OQ);
    _mm256_storeu_pd(g + i, _mm256_and_pd(_mm256_loadu_pd(g + i), mask));
  }
  for (; i < n; ++i) g[i] = a[i] > 0.0 ? g[i] : 0.0;
}

void cmac_f64(std::size_t n, const std::complex<double>* a, const std::complex<double>* x,
              std::complex<double>* y) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    const __m256d xs = _mm256_permute_pd(vx, 0x5);
    const __m256d prod =
        _mm256_fmaddsub_pd(_mm256_movedup_pd(va), vx, _mm256_mul_pd(_mm256_permute_pd(va, 0xF), xs));
    _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(_mm256_loadu_pd(py + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double ar = pa[2 * i], ai = pa[2 * i + 1], xr = px[2 * i], xi = px[2 * i + 1];
    py[2 * i] += ar * xr - ai * xi;
    py[2 * i + 1] += ar * xi + ai * xr;
  }
}

void cmac_conj_f64(std::size_t n, const std::complex<double>* a, const std::complex<double>* x,
                   std::complex<double>* y) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    const __m256d xs = _mm256_permute_pd(vx, 0x5);
    const __m256d prod =
        _mm256_fmsubadd_pd(_mm256_movedup_pd(va), vx, _mm256_mul_pd(_mm256_permute_pd(va, 0xF), xs));
    _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(_mm256_loadu_pd(py + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double ar = pa[2 * i], ai = pa[2 * i + 1], xr = px[2 * i], xi = px[2 * i + 1];
    py[2 * i] += ar * xr + ai * xi;
    py[2 * i + 1] += ar * xi - ai * xr;
  }
}

void cmul_conj_acc_f64(std::size_t n, const std::complex<double>* a, const std::complex<double>* b,
                       std::complex<double>* y) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* py = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    const __m256d as = _mm256_permute_pd(va, 0x5);
    const __m256d prod =
        _mm256_fmsubadd_pd(_mm256_movedup_pd(vb), va, _mm256_mul_pd(_mm256_permute_pd(vb, 0xF), as));
    _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(_mm256_loadu_pd(py + 2 * i), prod));
  }
  for (; i < n; ++i) {
    const double ar = pa[2 * i], ai = pa[2 * i + 1], br = pb[2 * i], bi = pb[2 * i + 1];
    py[2 * i] += ar * br + ai * bi;
    py[2 * i + 1] += ai * br - ar * bi;
  }
}

void scale_real_f64(std::size_t n, const double* s, const std::complex<double>* x, std::complex<double>* y) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d sd = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(s + i)), 0x50);
    _mm256_storeu_pd(py + 2 * i, _mm256_mul_pd(sd, _mm256_loadu_pd(px + 2 * i)));
  }
  for (; i < n; ++i) {
    py[2 * i] = s[i] * px[2 * i];
    py[2 * i + 1] = s[i] * px[2 * i + 1];
  }
}

}  // namespace

KernelTable<float> avx2_table_f32() noexcept {
  return {&axpy_f32, &dot_f32,      &sum_f32,           &relu_f32,      &relu_backward_f32,
          &cmac_f32, &cmac_conj_f32, &cmul_conj_acc_f32, &scale_real_f32};
}

KernelTable<double> avx2_table_f64() noexcept {
  return {&axpy_f64, &dot_f64,      &sum_f64,           &relu_f64,      &relu_backward_f64,
          &cmac_f64, &cmac_conj_f64, &cmul_conj_acc_f64, &scale_real_f64};
}

}  // namespace pawsim::kernels::detail
