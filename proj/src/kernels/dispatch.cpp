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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels/tables.hpp"
#include "pawsim/error.hpp"

namespace pawsim::kernels {

const char* to_string(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

namespace {

bool cpu_has_avx2() noexcept {
#if defined(PAWSIM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Kernels& scalar_table() noexcept {
  static const Kernels k{Isa::Scalar, detail::scalar_table_f32(), detail::scalar_table_f64()};
  return k;
}

const Kernels* initial_choice() {
  const Kernels* avx2 = avx2_kernels();
  if (const char* env = std::getenv("PAWSIM_ISA")) {
    const std::string_view want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && avx2 != nullptr) return avx2;
  }
  return avx2 != nullptr ? avx2 : &scalar_table();
}

std::atomic<const Kernels*>& current() {
  static std::atomic<const Kernels*> ptr{initial_choice()};
  return ptr;
}

}  // namespace

const Kernels& scalar_kernels() noexcept { return scalar_table(); }

const Kernels* avx2_kernels() noexcept {
#if defined(PAWSIM_HAVE_AVX2)
  static const Kernels k{Isa::Avx2, detail::avx2_table_f32(), detail::avx2_table_f64()};
  static const bool supported = cpu_has_avx2();
  return supported ? &k : nullptr;
#else
  return nullptr;
#endif
}

const Kernels& active() { return *current().load(std::memory_order_acquire); }

template <>
const KernelTable<float>& table<float>() {
  return active().f32;
}
template <>
const KernelTable<double>& table<double>() {
  return active().f64;
}

void select(Isa isa) {
  if (isa == Isa::Scalar) {
    current().store(&scalar_table(), std::memory_order_release);
    return;
  }
  const Kernels* avx2 = avx2_kernels();
  if (avx2 == nullptr) throw Error(ErrorCode::InvalidInput, "AVX2 kernels are not available on this machine");
  current().store(avx2, std::memory_order_release);
}

}  // namespace pawsim::kernels
