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
#include <vector>

#include "pawsim/grid.hpp"

namespace pawsim {

/// Real scalar field over a Grid2D, stored row-major: value(ix, iy) at iy * nx + ix.
/// Row iy = 0 is the top row.
class Field2D {
 public:
  explicit Field2D(const Grid2D& grid, double fill = 0.0);
  Field2D(const Grid2D& grid, std::vector<double> values);

  const Grid2D& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& at(std::size_t ix, std::size_t iy) noexcept { return values_[iy * grid_.nx() + ix]; }
  double at(std::size_t ix, std::size_t iy) const noexcept { return values_[iy * grid_.nx() + ix]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool all_finite() const noexcept;
  double sum() const noexcept;
  double min() const noexcept;
  double max() const noexcept;

 private:
  Grid2D grid_;
  std::vector<double> values_;
};

/// Real field over (x, y, t). Frames are contiguous: value(ix, iy, m) at
/// (m * ny + iy) * nx + ix.
class SpaceTimeField {
 public:
  SpaceTimeField(const Grid2D& grid, const TimeGrid& tgrid, double fill = 0.0);
  SpaceTimeField(const Grid2D& grid, const TimeGrid& tgrid, std::vector<double> values);

  const Grid2D& grid() const noexcept { return grid_; }
  const TimeGrid& tgrid() const noexcept { return tgrid_; }
  std::size_t nt() const noexcept { return tgrid_.nt(); }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t frame_size() const noexcept { return grid_.size(); }

  double& at(std::size_t ix, std::size_t iy, std::size_t m) noexcept {
    return values_[(m * grid_.ny() + iy) * grid_.nx() + ix];
  }
  double at(std::size_t ix, std::size_t iy, std::size_t m) const noexcept {
    return values_[(m * grid_.ny() + iy) * grid_.nx() + ix];
  }

  std::span<double> frame(std::size_t m) noexcept { return std::span(values_).subspan(m * frame_size(), frame_size()); }
  std::span<const double> frame(std::size_t m) const noexcept {
    return std::span(values_).subspan(m * frame_size(), frame_size());
  }
  Field2D frame_field(std::size_t m) const;

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool all_finite() const noexcept;

 private:
  Grid2D grid_;
  TimeGrid tgrid_;
  std::vector<double> values_;
};

}  // namespace pawsim
