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

#include "pawsim/error.hpp"

namespace pawsim {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid input";
    case ErrorCode::NumericalFailure: return "numerical failure";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::Truncated: return "truncated file";
    case ErrorCode::BadMagic: return "bad magic";
    case ErrorCode::VersionMismatch: return "version mismatch";
    case ErrorCode::LengthMismatch: return "length mismatch";
    case ErrorCode::UnknownDtype: return "unknown dtype";
  }
  return "unknown error";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message,
                           std::optional<std::uint64_t> offset) {
  std::string out = to_string(code);
  out += ": ";
  out += message;
  if (offset) out += " (at byte offset " + std::to_string(*offset) + ")";
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<std::uint64_t> offset)
    : std::runtime_error(format_message(code, message, offset)), code_(code), offset_(offset) {}

void throw_invalid(const std::string& message) { throw Error(ErrorCode::InvalidInput, message); }

}  // namespace pawsim
