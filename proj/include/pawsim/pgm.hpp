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
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pawsim/field.hpp"

namespace pawsim {

/// Grayscale raster as stored in a PGM file, row-major from the top row.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::uint32_t maxval = 255;
  std::vector<std::uint16_t> pixels;
};

/// Parses binary (P5) or plain (P2) PGM. Failures raise Error{Parse} with the
/// offending byte offset.
GrayImage parse_pgm(std::span<const std::uint8_t> bytes);
GrayImage read_pgm(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_pgm(const GrayImage& image);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// 16-bit image of a field already scaled to [0, 1]; values are clamped.
GrayImage to_gray16(const Field2D& unit_field);

}  // namespace pawsim
