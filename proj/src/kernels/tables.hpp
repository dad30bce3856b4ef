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

// Internal: constructors for the per-ISA kernel tables.

#pragma once

#include "pawsim/kernels.hpp"

namespace pawsim::kernels::detail {

KernelTable<float> scalar_table_f32() noexcept;
KernelTable<double> scalar_table_f64() noexcept;

#if defined(PAWSIM_HAVE_AVX2)
KernelTable<float> avx2_table_f32() noexcept;
KernelTable<double> avx2_table_f64() noexcept;
#endif

}  // namespace pawsim::kernels::detail
