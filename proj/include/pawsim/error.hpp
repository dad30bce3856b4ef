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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace pawsim {

enum class ErrorCode {
  InvalidInput,      // rejected input: bad shape, out-of-range parameter
  NumericalFailure,  // non-finite value produced during evaluation
  Parse,             // ill-formed text or image file
  Io,                // file could not be opened, read or written
  Truncated,         // container ended before a declared length
  BadMagic,
  VersionMismatch,
  LengthMismatch,
  UnknownDtype,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. Errors that come from a file carry
/// the byte offset at which the problem was detected.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::uint64_t> offset = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::uint64_t> offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::optional<std::uint64_t> offset_;
};

[[noreturn]] void throw_invalid(const std::string& message);

inline void require(bool condition, const std::string& message) {
  if (!condition) throw_invalid(message);
}

}  // namespace pawsim
