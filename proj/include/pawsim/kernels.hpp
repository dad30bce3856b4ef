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

namespace pawsim::kernels {

enum class Isa { Scalar, Avx2 };

const char* to_string(Isa isa) noexcept;

/// Inner loops shared by the solver and the neural operator. Complex arrays
/// are interleaved (re, im) and `n` counts complex elements.
template <class Real>
struct KernelTable {
  using C = std::complex<Real>;
  // y += a * x
  void (*axpy)(std::size_t n, Real a, const Real* x, Real* y);
  Real (*dot)(std::size_t n, const Real* x, const Real* y);
  Real (*sum)(std::size_t n, const Real* x);
  // x = max(x, 0)
  void (*relu)(std::size_t n, Real* x);
  // g = (a > 0) ? g : 0
  void (*relu_backward)(std::size_t n, const Real* a, Real* g);
  // y += a * x
  void (*cmac)(std::size_t n, const C* a, const C* x, C* y);
  // y += conj(a) * x
  void (*cmac_conj)(std::size_t n, const C* a, const C* x, C* y);
  // y += a * conj(b)
  void (*cmul_conj_acc)(std::size_t n, const C* a, const C* b, C* y);
  // y = s * x with a real per-element multiplier
  void (*scale_real)(std::size_t n, const Real* s, const C* x, C* y);
};

struct Kernels {
  Isa isa;
  KernelTable<float> f32;
  KernelTable<double> f64;
};

/// Active table. Chosen on first use: AVX2 when the CPU supports AVX2 and FMA
/// and the build includes it, else scalar. The environment variable
/// PAWSIM_ISA=scalar|avx2 overrides the choice.
const Kernels& active();
template <class Real>
const KernelTable<Real>& table();

const Kernels& scalar_kernels() noexcept;
/// nullptr when not compiled in or not supported by this CPU.
const Kernels* avx2_kernels() noexcept;

/// Force a table; throws if the ISA is unavailable. Intended for tests and benchmarks.
void select(Isa isa);

}  // namespace pawsim::kernels
