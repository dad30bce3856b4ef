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

#include <cstddef>
#include <span>

#include "pawsim/field.hpp"
#include "pawsim/solver.hpp"

namespace pawsim {

struct SsimParams {
  std::size_t window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;

  void validate() const;
};

double mse(std::span<const double> a, std::span<const double> b);
double mse(const Field2D& a, const Field2D& b);
double mse(const SpaceTimeField& a, const SpaceTimeField& b);

/// Mean of the Gaussian-window SSIM map over the fully overlapped
/// ("valid") window positions.
double ssim(const Field2D& a, const Field2D& b, const SsimParams& params = {});

struct Normalized {
  Field2D field;
  bool constant = false;  // input had max == min; field is all zeros
};

/// (a - min) / (max - min).
Normalized normalize01(const Field2D& a);

struct TimeReversalOptions {
  std::size_t pad_factor = 2;
};

/// Runs the k-space recurrence backwards from a zero field, overwriting the
/// sensor pixels with the measured pressure at every step, and returns the
/// final (t = 0) frame without rescaling. Linear in the sensor values.
Field2D time_reversal_raw(const SensorData& sensor, const MediumParams& medium,
                          const TimeReversalOptions& options = {});

/// time_reversal_raw followed by normalize01.
Field2D time_reversal(const SensorData& sensor, const MediumParams& medium,
                      const TimeReversalOptions& options = {});

}  // namespace pawsim
