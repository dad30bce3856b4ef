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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pawsim/field.hpp"

namespace pawsim {

enum class PhantomKind { SheppLogan, Vasculature, TumorBlobs, Discs, Bitmap };

const char* to_string(PhantomKind kind) noexcept;
PhantomKind phantom_kind_from_string(const std::string& name);

/// Generator request. `params` holds the kind-specific numeric settings
/// (missing keys take defaults); `path` is used by the bitmap kind.
struct PhantomSpec {
  PhantomKind kind = PhantomKind::Vasculature;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;
  std::string path;
};

/// Modified (Toft) Shepp-Logan head: ten ellipses in [-1, 1]^2 with y up.
struct Ellipse {
  double intensity;
  double a, b;    // semi-axes
  double x0, y0;  // centre
  double phi;     // rotation, degrees
};
std::span<const Ellipse> shepp_logan_ellipses() noexcept;

/// Normalized coordinates of pixel centres; exactly antisymmetric under mirroring.
inline double pixel_x(std::size_t ix, std::size_t nx) noexcept {
  return (2.0 * static_cast<double>(ix) + 1.0 - static_cast<double>(nx)) / static_cast<double>(nx);
}
inline double pixel_y(std::size_t iy, std::size_t ny) noexcept {
  return (static_cast<double>(ny) - 2.0 * static_cast<double>(iy) - 1.0) / static_cast<double>(ny);
}

Field2D shepp_logan(const Grid2D& grid);

struct VasculatureParams {
  int n_trees = 3;
  double branch_prob = 0.08;  // per step
  double step_len = 1.0;      // pixels
  double thickness = 1.5;     // pixels, root vessel diameter
};

/// Binary branching random-walk vessels. Occupied fraction is kept in
/// [0.01, 0.35] by redrawing from derived sub-seeds; n_trees = 0 gives zeros.
Field2D vasculature(const Grid2D& grid, std::uint64_t seed, const VasculatureParams& params = {});

struct Blob {
  double cx, cy;   // centre, pixel units
  double radius;   // pixels
  std::array<double, 3> harmonic_amp{};    // boundary harmonics 2, 3, 4
  std::array<double, 3> harmonic_phase{};
};

/// Cosine-taper profile 0.5 (1 + cos(pi r / R(theta))) inside R(theta),
/// maximum over blobs.
Field2D render_blobs(const Grid2D& grid, std::span<const Blob> blobs);

struct TumorParams {
  int n_blobs = 3;
  double r_min = 2.0;  // pixels
  double r_max = 6.0;
  double perturbation = 0.15;  // bound on relative boundary displacement
};

Field2D tumor_blobs(const Grid2D& grid, std::uint64_t seed, const TumorParams& params = {});

struct DiscParams {
  int n_discs = 4;
  double r_min = 1.5;
  double r_max = 5.0;
};

/// Union of uniform binary discs.
Field2D discs(const Grid2D& grid, std::uint64_t seed, const DiscParams& params = {});

/// Nearest-neighbour resampling of a PGM (P2/P5) onto the grid, divided by maxval.
Field2D load_bitmap(const std::filesystem::path& path, const Grid2D& grid);
struct GrayImage;
Field2D resample_image(const GrayImage& image, const Grid2D& grid);

Field2D make_phantom(const PhantomSpec& spec, const Grid2D& grid);

}  // namespace pawsim
