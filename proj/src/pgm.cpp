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

#include "pawsim/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "pawsim/error.hpp"

namespace pawsim {

namespace {

class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= bytes_.size(); }
  std::uint8_t peek() const noexcept { return bytes_[pos_]; }
  std::uint8_t take() noexcept { return bytes_[pos_++]; }

  [[noreturn]] void fail(const std::string& what) const { throw Error(ErrorCode::Parse, "PGM: " + what, pos_); }

  // Header whitespace may contain comments running to the end of a line.
  void skip_space_and_comments() {
    while (!at_end()) {
      if (peek() == '#') {
        while (!at_end() && peek() != '\n' && peek() != '\r') ++pos_;
      } else if (std::isspace(peek())) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint64_t number(const char* what) {
    skip_space_and_comments();
    if (at_end()) fail(std::string("unexpected end of file while reading ") + what);
    if (!std::isdigit(peek())) fail(std::string("expected a decimal ") + what);
    std::uint64_t v = 0;
    while (!at_end() && std::isdigit(peek())) {
      v = v * 10 + static_cast<std::uint64_t>(take() - '0');
      if (v > 0xFFFFFFFFULL) fail(std::string(what) + " is too large");
    }
    return v;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage parse_pgm(std::span<const std::uint8_t> bytes) {
  Cursor in(bytes);
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    in.fail("missing P2/P5 magic number");
  }
  const bool binary = bytes[1] == '5';
  in.take();
  in.take();

  GrayImage img;
  img.width = in.number("width");
  img.height = in.number("height");
  const std::uint64_t maxval = in.number("maxval");
  if (img.width == 0 || img.height == 0) in.fail("image has zero width or height");
  if (maxval == 0 || maxval > 65535) in.fail("maxval must be in 1..65535");
  img.maxval = static_cast<std::uint32_t>(maxval);
  const std::size_t count = img.width * img.height;
  img.pixels.resize(count);

  if (binary) {
    if (in.at_end() || !std::isspace(in.peek())) in.fail("expected one whitespace byte before the raster");
    in.take();
    const std::size_t sample_bytes = img.maxval < 256 ? 1 : 2;
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t v = 0;
      for (std::size_t b = 0; b < sample_bytes; ++b) {
        if (in.at_end()) in.fail("raster ends after " + std::to_string(i) + " of " + std::to_string(count) + " pixels");
        v = (v << 8) | in.take();
      }
      if (v > img.maxval) in.fail("pixel value exceeds maxval");
      img.pixels[i] = static_cast<std::uint16_t>(v);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint64_t v = in.number("pixel value");
      if (v > img.maxval) in.fail("pixel value exceeds maxval");
      img.pixels[i] = static_cast<std::uint16_t>(v);
    }
  }
  return img;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return parse_pgm(bytes);
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image) {
  require(image.pixels.size() == image.width * image.height, "image pixel count does not match its size");
  require(image.maxval >= 1 && image.maxval <= 65535, "maxval must be in 1..65535");
  const std::string header = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n" +
                             std::to_string(image.maxval) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const bool wide = image.maxval > 255;
  for (std::uint16_t v : image.pixels) {
    if (wide) out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  const std::vector<std::uint8_t> bytes = encode_pgm(image);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(ErrorCode::Io, "short write to " + path.string());
}

GrayImage to_gray16(const Field2D& unit_field) {
  GrayImage img;
  img.width = unit_field.grid().nx();
  img.height = unit_field.grid().ny();
  img.maxval = 65535;
  img.pixels.resize(unit_field.size());
  for (std::size_t i = 0; i < unit_field.size(); ++i) {
    const double raw = unit_field.values()[i];
    const double v = std::isfinite(raw) ? std::clamp(raw, 0.0, 1.0) : 0.0;
    img.pixels[i] = static_cast<std::uint16_t>(std::lround(v * 65535.0));
  }
  return img;
}

}  // namespace pawsim
