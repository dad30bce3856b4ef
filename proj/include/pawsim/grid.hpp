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
#include <vector>

namespace pawsim {

/// Uniform 2D computational grid. Sizes are even and at least 4 so that every
/// axis has an unambiguous Nyquist index.
class Grid2D {
 public:
  Grid2D(std::size_t nx, std::size_t ny, double dx = 1e-4, double dy = 1e-4);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  double dx() const noexcept { return dx_; }
  double dy() const noexcept { return dy_; }
  std::size_t size() const noexcept { return nx_ * ny_; }

  /// Grid with the same spacing and each side multiplied by `factor`.
  Grid2D scaled(std::size_t factor) const;

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  std::size_t nx_;
  std::size_t ny_;
  double dx_;
  double dy_;
};

class TimeGrid {
 public:
  TimeGrid(std::size_t nt, double dt = 2e-8);

  std::size_t nt() const noexcept { return nt_; }
  double dt() const noexcept { return dt_; }
  double time(std::size_t frame) const noexcept { return static_cast<double>(frame) * dt_; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  std::size_t nt_;
  double dt_;
};

/// Angular wavenumbers in standard DFT order. `kmag` is row-major over (iy, ix).
struct KGrid {
  std::vector<double> kx;  // nx entries, rad/m
  std::vector<double> ky;  // ny entries, rad/m
  std::vector<double> kmag;

  double magnitude(std::size_t ix, std::size_t iy) const noexcept { return kmag[iy * kx.size() + ix]; }
};

/// Signed DFT frequency index of bin `j` on an axis of length `n`.
inline long frequency_index(std::size_t j, std::size_t n) noexcept {
  return j < n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
}

KGrid wavenumbers(const Grid2D& grid);

}  // namespace pawsim
