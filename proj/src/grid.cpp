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

#include "pawsim/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pawsim/error.hpp"

namespace pawsim {

Grid2D::Grid2D(std::size_t nx, std::size_t ny, double dx, double dy) : nx_(nx), ny_(ny), dx_(dx), dy_(dy) {
  require(nx >= 4 && ny >= 4, "grid sides must be at least 4, got " + std::to_string(nx) + "x" + std::to_string(ny));
  require(nx % 2 == 0 && ny % 2 == 0, "grid sides must be even, got " + std::to_string(nx) + "x" + std::to_string(ny));
  require(std::isfinite(dx) && std::isfinite(dy) && dx > 0 && dy > 0, "grid spacing must be positive");
}

Grid2D Grid2D::scaled(std::size_t factor) const {
  require(factor >= 1, "grid scale factor must be at least 1");
  return Grid2D(nx_ * factor, ny_ * factor, dx_, dy_);
}

TimeGrid::TimeGrid(std::size_t nt, double dt) : nt_(nt), dt_(dt) {
  require(nt >= 1, "time grid needs at least one frame");
  require(std::isfinite(dt) && dt > 0, "time step must be positive");
}

namespace {

std::vector<double> axis_wavenumbers(std::size_t n, double d) {
  std::vector<double> k(n);
  const double scale = 2.0 * std::numbers::pi / (static_cast<double>(n) * d);
  for (std::size_t j = 0; j < n; ++j) k[j] = scale * static_cast<double>(frequency_index(j, n));
  return k;
}

}  // namespace

KGrid wavenumbers(const Grid2D& grid) {
  KGrid out;
  out.kx = axis_wavenumbers(grid.nx(), grid.dx());
  out.ky = axis_wavenumbers(grid.ny(), grid.dy());
  out.kmag.resize(grid.size());
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      out.kmag[iy * grid.nx() + ix] = std::hypot(out.kx[ix], out.ky[iy]);
    }
  }
  return out;
}

}  // namespace pawsim
