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

#include "pawsim/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pawsim/error.hpp"

namespace pawsim {

namespace {

bool finite_span(std::span<const double> v) noexcept {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

Field2D::Field2D(const Grid2D& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field2D::Field2D(const Grid2D& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  require(values_.size() == grid_.size(), "field has " + std::to_string(values_.size()) + " values, grid needs " +
                                              std::to_string(grid_.size()));
}

bool Field2D::all_finite() const noexcept { return finite_span(values_); }
double Field2D::sum() const noexcept { return std::accumulate(values_.begin(), values_.end(), 0.0); }
double Field2D::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double Field2D::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

SpaceTimeField::SpaceTimeField(const Grid2D& grid, const TimeGrid& tgrid, double fill)
    : grid_(grid), tgrid_(tgrid), values_(grid.size() * tgrid.nt(), fill) {}

SpaceTimeField::SpaceTimeField(const Grid2D& grid, const TimeGrid& tgrid, std::vector<double> values)
    : grid_(grid), tgrid_(tgrid), values_(std::move(values)) {
  require(values_.size() == grid_.size() * tgrid_.nt(),
          "space-time field has " + std::to_string(values_.size()) + " values, expected " +
              std::to_string(grid_.size() * tgrid_.nt()));
}

Field2D SpaceTimeField::frame_field(std::size_t m) const {
  require(m < nt(), "frame index out of range");
  auto f = frame(m);
  return Field2D(grid_, std::vector<double>(f.begin(), f.end()));
}

bool SpaceTimeField::all_finite() const noexcept { return finite_span(values_); }

}  // namespace pawsim
