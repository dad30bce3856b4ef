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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace pawsim {

/// Binary container: "PAWS", u32 version, u32 metadata length, UTF-8 JSON
/// metadata, u32 tensor count, then per tensor: u16 name length, name,
/// u8 rank, u32 dims[rank], u8 dtype, payload. All integers and payloads
/// are little-endian; payloads are row-major.
inline constexpr std::uint32_t kContainerVersion = 1;

enum class Dtype : std::uint8_t { F32 = 1, F64 = 2, C64 = 3, C128 = 4 };

std::size_t dtype_size(Dtype dtype);
const char* to_string(Dtype dtype) noexcept;

struct Tensor {
  std::string name;
  std::vector<std::uint32_t> dims;
  Dtype dtype = Dtype::F64;
  std::vector<std::uint8_t> payload;  // little-endian element bytes

  std::size_t element_count() const noexcept;

  static Tensor from_f32(std::string name, std::vector<std::uint32_t> dims, std::span<const float> values);
  static Tensor from_f64(std::string name, std::vector<std::uint32_t> dims, std::span<const double> values);
  static Tensor from_c64(std::string name, std::vector<std::uint32_t> dims, std::span<const std::complex<float>> values);
  static Tensor from_c128(std::string name, std::vector<std::uint32_t> dims,
                          std::span<const std::complex<double>> values);

  /// Element values widened to double (real dtypes only).
  std::vector<double> to_f64() const;
  /// Complex dtypes (or real, with zero imaginary part) widened to double.
  std::vector<std::complex<double>> to_c128() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;
};

struct Container {
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<Tensor> tensors;

  const Tensor& at(const std::string& name) const;
  const Tensor* find(const std::string& name) const noexcept;

  friend bool operator==(const Container&, const Container&) = default;
};

std::vector<std::uint8_t> encode_container(const Container& container);
/// Errors carry the byte offset of the offending field: Truncated, BadMagic,
/// VersionMismatch, LengthMismatch, UnknownDtype, or Parse for bad metadata.
Container decode_container(std::span<const std::uint8_t> bytes);

void save_container(const std::filesystem::path& path, const Container& container);
Container load_container(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace pawsim
