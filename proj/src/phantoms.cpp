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

#include "pawsim/phantoms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pawsim/error.hpp"
#include "pawsim/pgm.hpp"
#include "pawsim/rng.hpp"

namespace pawsim {

namespace {

constexpr std::array<Ellipse, 10> kSheppLogan{{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
}};

double param(const PhantomSpec& spec, const char* key, double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

void stamp_disc(Field2D& f, double x, double y, double radius) {
  const Grid2D& g = f.grid();
  const double r2 = radius * radius + 0.25;  // always covers the nearest pixel
  const double reach = std::sqrt(r2);
  const long x_lo = std::max(0L, static_cast<long>(std::floor(x - reach)));
  const long x_hi = std::min(static_cast<long>(g.nx()) - 1, static_cast<long>(std::ceil(x + reach)));
  const long y_lo = std::max(0L, static_cast<long>(std::floor(y - reach)));
  const long y_hi = std::min(static_cast<long>(g.ny()) - 1, static_cast<long>(std::ceil(y + reach)));
  for (long iy = y_lo; iy <= y_hi; ++iy) {
    for (long ix = x_lo; ix <= x_hi; ++ix) {
      const double ddx = static_cast<double>(ix) - x;
      const double ddy = static_cast<double>(iy) - y;
      if (ddx * ddx + ddy * ddy <= r2) f.at(static_cast<std::size_t>(ix), static_cast<std::size_t>(iy)) = 1.0;
    }
  }
}

struct Branch {
  double x, y, angle, width;
  int depth;
};

Field2D grow_vessels(const Grid2D& grid, CounterRng rng, const VasculatureParams& p) {
  Field2D f(grid);
  const double nx = static_cast<double>(grid.nx());
  const double ny = static_cast<double>(grid.ny());
  const double extent = std::max(nx, ny);
  constexpr int kMaxDepth = 4;
  constexpr double kWander = 0.25;  // rad per step, std dev
  std::vector<Branch> stack;
  for (int t = 0; t < p.n_trees; ++t) {
    stack.push_back({rng.uniform(0.0, nx - 1.0), rng.uniform(0.0, ny - 1.0),
                     rng.uniform(0.0, 2.0 * std::numbers::pi), p.thickness, 0});
    while (!stack.empty()) {
      Branch b = stack.back();
      stack.pop_back();
      const auto steps = static_cast<int>(rng.uniform(0.5, 1.2) * extent / p.step_len);
      const int substeps = std::max(1, static_cast<int>(std::ceil(p.step_len / 0.5)));
      stamp_disc(f, b.x, b.y, 0.5 * b.width);
      for (int s = 0; s < steps; ++s) {
        b.angle += kWander * rng.normal();
        const double sx = p.step_len * std::cos(b.angle) / substeps;
        const double sy = p.step_len * std::sin(b.angle) / substeps;
        for (int k = 0; k < substeps; ++k) {
          b.x += sx;
          b.y += sy;
          stamp_disc(f, b.x, b.y, 0.5 * b.width);
        }
        if (b.x < -0.5 || b.y < -0.5 || b.x > nx - 0.5 || b.y > ny - 0.5) break;
        if (b.depth < kMaxDepth && rng.uniform() < p.branch_prob) {
          const double turn = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.4, 0.9);
          stack.push_back({b.x, b.y, b.angle + turn, std::max(1.0, 0.8 * b.width), b.depth + 1});
        }
      }
    }
  }
  return f;
}

double occupied_fraction(const Field2D& f) { return f.sum() / static_cast<double>(f.size()); }

}  // namespace

const char* to_string(PhantomKind kind) noexcept {
  switch (kind) {
    case PhantomKind::SheppLogan: return "shepp_logan";
    case PhantomKind::Vasculature: return "vasculature";
    case PhantomKind::TumorBlobs: return "tumor_blobs";
    case PhantomKind::Discs: return "discs";
    case PhantomKind::Bitmap: return "bitmap";
  }
  return "unknown";
}

PhantomKind phantom_kind_from_string(const std::string& name) {
  for (PhantomKind k : {PhantomKind::SheppLogan, PhantomKind::Vasculature, PhantomKind::TumorBlobs,
                        PhantomKind::Discs, PhantomKind::Bitmap}) {
    if (name == to_string(k)) return k;
  }
  throw_invalid("unknown phantom kind '" + name + "'");
}

std::span<const Ellipse> shepp_logan_ellipses() noexcept { return kSheppLogan; }

Field2D shepp_logan(const Grid2D& grid) {
  Field2D f(grid);
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    const double y = pixel_y(iy, grid.ny());
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const double x = pixel_x(ix, grid.nx());
      double v = 0.0;
      for (const Ellipse& e : kSheppLogan) {
        const double phi = e.phi * std::numbers::pi / 180.0;
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        const double u = (x - e.x0) * c + (y - e.y0) * s;
        const double w = -(x - e.x0) * s + (y - e.y0) * c;
        if ((u * u) / (e.a * e.a) + (w * w) / (e.b * e.b) <= 1.0) v += e.intensity;
      }
      f.at(ix, iy) = std::clamp(v, 0.0, 1.0);
    }
  }
  return f;
}

Field2D vasculature(const Grid2D& grid, std::uint64_t seed, const VasculatureParams& params) {
  require(params.n_trees >= 0, "vasculature needs a non-negative tree count");
  require(params.branch_prob >= 0 && params.branch_prob <= 1, "branch probability must lie in [0, 1]");
  require(params.step_len > 0 && params.thickness > 0, "vessel step length and thickness must be positive");
  if (params.n_trees == 0) return Field2D(grid);
  const CounterRng root(seed, 0x7661736300000000ULL);
  constexpr int kAttempts = 256;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Field2D f = grow_vessels(grid, root.split(static_cast<std::uint64_t>(attempt)), params);
    const double occ = occupied_fraction(f);
    if (occ >= 0.01 && occ <= 0.35) return f;
  }
  throw Error(ErrorCode::NumericalFailure,
              "vasculature: no draw reached an occupied fraction in [0.01, 0.35]; adjust the parameters");
}

Field2D render_blobs(const Grid2D& grid, std::span<const Blob> blobs) {
  Field2D f(grid);
  for (const Blob& b : blobs) {
    const double reach = b.radius * (1.0 + std::abs(b.harmonic_amp[0]) + std::abs(b.harmonic_amp[1]) +
                                     std::abs(b.harmonic_amp[2]));
    const long x_lo = std::max(0L, static_cast<long>(std::floor(b.cx - reach)));
    const long x_hi = std::min(static_cast<long>(grid.nx()) - 1, static_cast<long>(std::ceil(b.cx + reach)));
    const long y_lo = std::max(0L, static_cast<long>(std::floor(b.cy - reach)));
    const long y_hi = std::min(static_cast<long>(grid.ny()) - 1, static_cast<long>(std::ceil(b.cy + reach)));
    for (long iy = y_lo; iy <= y_hi; ++iy) {
      for (long ix = x_lo; ix <= x_hi; ++ix) {
        const double ddx = static_cast<double>(ix) - b.cx;
        const double ddy = static_cast<double>(iy) - b.cy;
        const double r = std::hypot(ddx, ddy);
        const double theta = std::atan2(ddy, ddx);
        double scale = 1.0;
        for (int h = 0; h < 3; ++h) scale += b.harmonic_amp[h] * std::cos((h + 2) * theta + b.harmonic_phase[h]);
        const double edge = b.radius * scale;
        if (r >= edge) continue;
        const double v = 0.5 * (1.0 + std::cos(std::numbers::pi * r / edge));
        double& px = f.at(static_cast<std::size_t>(ix), static_cast<std::size_t>(iy));
        px = std::max(px, v);
      }
    }
  }
  return f;
}

Field2D tumor_blobs(const Grid2D& grid, std::uint64_t seed, const TumorParams& params) {
  const double half = 0.5 * static_cast<double>(std::min(grid.nx(), grid.ny()));
  require(params.n_blobs >= 0, "tumor blobs need a non-negative count");
  require(params.r_min > 0 && params.r_min <= params.r_max && params.r_max < half,
          "tumor radii must satisfy 0 < r_min <= r_max < min(nx, ny) / 2");
  require(params.perturbation >= 0 && params.perturbation < 1, "tumor perturbation must lie in [0, 1)");
  CounterRng rng(seed, 0x74756d6f00000000ULL);
  const double margin = std::min(params.r_max * (1.0 + params.perturbation), half);
  auto centre = [&](std::size_t n) {
    const double lo = margin;
    const double hi = static_cast<double>(n) - 1.0 - margin;
    return hi > lo ? rng.uniform(lo, hi) : 0.5 * (static_cast<double>(n) - 1.0);
  };
  std::vector<Blob> blobs;
  for (int i = 0; i < params.n_blobs; ++i) {
    Blob b{};
    b.cx = centre(grid.nx());
    b.cy = centre(grid.ny());
    b.radius = rng.uniform(params.r_min, params.r_max);
    for (int h = 0; h < 3; ++h) {
      b.harmonic_amp[h] = params.perturbation / 3.0 * rng.uniform(-1.0, 1.0);
      b.harmonic_phase[h] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    blobs.push_back(b);
  }
  return render_blobs(grid, blobs);
}

Field2D discs(const Grid2D& grid, std::uint64_t seed, const DiscParams& params) {
  const double half = 0.5 * static_cast<double>(std::min(grid.nx(), grid.ny()));
  require(params.n_discs >= 0, "disc count must be non-negative");
  require(params.r_min > 0 && params.r_min <= params.r_max && params.r_max < half,
          "disc radii must satisfy 0 < r_min <= r_max < min(nx, ny) / 2");
  CounterRng rng(seed, 0x6469736300000000ULL);
  Field2D f(grid);
  for (int i = 0; i < params.n_discs; ++i) {
    const double r = rng.uniform(params.r_min, params.r_max);
    const double cx = rng.uniform(r, static_cast<double>(grid.nx()) - 1.0 - r);
    const double cy = rng.uniform(r, static_cast<double>(grid.ny()) - 1.0 - r);
    for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
      for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
        if (std::hypot(static_cast<double>(ix) - cx, static_cast<double>(iy) - cy) <= r) f.at(ix, iy) = 1.0;
      }
    }
  }
  return f;
}

Field2D resample_image(const GrayImage& image, const Grid2D& grid) {
  require(image.width > 0 && image.height > 0 && image.pixels.size() == image.width * image.height,
          "image is empty or inconsistent");
  Field2D f(grid);
  const double inv_max = 1.0 / static_cast<double>(image.maxval);
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    const std::size_t sy = (2 * iy + 1) * image.height / (2 * grid.ny());
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const std::size_t sx = (2 * ix + 1) * image.width / (2 * grid.nx());
      f.at(ix, iy) = std::min(1.0, image.pixels[sy * image.width + sx] * inv_max);
    }
  }
  return f;
}

Field2D load_bitmap(const std::filesystem::path& path, const Grid2D& grid) {
  return resample_image(read_pgm(path), grid);
}

Field2D make_phantom(const PhantomSpec& spec, const Grid2D& grid) {
  switch (spec.kind) {
    case PhantomKind::SheppLogan: return shepp_logan(grid);
    case PhantomKind::Vasculature: {
      const VasculatureParams d;
      return vasculature(grid, spec.seed,
                         {static_cast<int>(param(spec, "n_trees", d.n_trees)), param(spec, "branch_prob", d.branch_prob),
                          param(spec, "step_len", d.step_len), param(spec, "thickness", d.thickness)});
    }
    case PhantomKind::TumorBlobs: {
      const TumorParams d;
      return tumor_blobs(grid, spec.seed,
                         {static_cast<int>(param(spec, "n_blobs", d.n_blobs)), param(spec, "r_min", d.r_min),
                          param(spec, "r_max", d.r_max), param(spec, "perturbation", d.perturbation)});
    }
    case PhantomKind::Discs: {
      const DiscParams d;
      return discs(grid, spec.seed,
                   {static_cast<int>(param(spec, "n_discs", d.n_discs)), param(spec, "r_min", d.r_min),
                    param(spec, "r_max", d.r_max)});
    }
    case PhantomKind::Bitmap:
      require(!spec.path.empty(), "bitmap phantom needs a path");
      return load_bitmap(spec.path, grid);
  }
  throw_invalid("unhandled phantom kind");
}

}  // namespace pawsim
