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

#include "pawsim/container.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

#include "pawsim/error.hpp"

namespace pawsim {

std::size_t dtype_size(Dtype dtype) {
  switch (dtype) {
    case Dtype::F32: return 4;
    case Dtype::F64: return 8;
    case Dtype::C64: return 8;
    case Dtype::C128: return 16;
  }
  throw Error(ErrorCode::UnknownDtype, "unknown dtype tag " + std::to_string(static_cast<int>(dtype)));
}

const char* to_string(Dtype dtype) noexcept {
  switch (dtype) {
    case Dtype::F32: return "f32";
    case Dtype::F64: return "f64";
    case Dtype::C64: return "c64";
    case Dtype::C128: return "c128";
  }
  return "unknown";
}

namespace {

template <class U>
void put_uint(std::vector<std::uint8_t>& out, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

template <class U>
U get_uint(const std::uint8_t* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<U>(p[i]) << (8 * i));
  return v;
}

// Reals are copied through their integer images so that the byte order is
// explicit and every bit pattern (NaN payloads included) survives.
template <class Real>
std::vector<std::uint8_t> pack(std::span<const Real> values) {
  using U = std::conditional_t<sizeof(Real) == 4, std::uint32_t, std::uint64_t>;
  std::vector<std::uint8_t> out;
  out.reserve(values.size() * sizeof(Real));
  for (Real v : values) put_uint<U>(out, std::bit_cast<U>(v));
  return out;
}

template <class Real>
std::vector<Real> unpack(const std::vector<std::uint8_t>& bytes) {
  using U = std::conditional_t<sizeof(Real) == 4, std::uint32_t, std::uint64_t>;
  std::vector<Real> out(bytes.size() / sizeof(Real));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::bit_cast<Real>(get_uint<U>(bytes.data() + i * sizeof(Real)));
  return out;
}

std::size_t count_of(const std::vector<std::uint32_t>& dims) {
  std::size_t n = 1;
  for (std::uint32_t d : dims) {
    if (d != 0 && n > std::numeric_limits<std::size_t>::max() / d) throw_invalid("tensor dimensions overflow");
    n *= d;
  }
  return n;
}

Tensor make(std::string name, std::vector<std::uint32_t> dims, Dtype dtype, std::vector<std::uint8_t> payload,
            std::size_t count) {
  if (count != count_of(dims)) {
    throw Error(ErrorCode::LengthMismatch, "tensor " + name + " has " + std::to_string(count) +
                                               " elements but its dimensions call for " +
                                               std::to_string(count_of(dims)));
  }
  return Tensor{std::move(name), std::move(dims), dtype, std::move(payload)};
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

  const std::uint8_t* take(std::size_t n, const char* what) {
    if (remaining() < n) {
      throw Error(ErrorCode::Truncated,
                  std::string("file ends inside ") + what + " (" + std::to_string(n) + " bytes needed, " +
                      std::to_string(remaining()) + " left)",
                  pos_);
    }
    const std::uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }
  template <class U>
  U uint(const char* what) {
    return get_uint<U>(take(sizeof(U), what));
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t Tensor::element_count() const noexcept {
  std::size_t n = 1;
  for (std::uint32_t d : dims) n *= d;
  return n;
}

Tensor Tensor::from_f32(std::string name, std::vector<std::uint32_t> dims, std::span<const float> values) {
  return make(std::move(name), std::move(dims), Dtype::F32, pack(values), values.size());
}

Tensor Tensor::from_f64(std::string name, std::vector<std::uint32_t> dims, std::span<const double> values) {
  return make(std::move(name), std::move(dims), Dtype::F64, pack(values), values.size());
}

Tensor Tensor::from_c64(std::string name, std::vector<std::uint32_t> dims,
                        std::span<const std::complex<float>> values) {
  const std::span<const float> reals(reinterpret_cast<const float*>(values.data()), 2 * values.size());
  return make(std::move(name), std::move(dims), Dtype::C64, pack(reals), values.size());
}

Tensor Tensor::from_c128(std::string name, std::vector<std::uint32_t> dims,
                         std::span<const std::complex<double>> values) {
  const std::span<const double> reals(reinterpret_cast<const double*>(values.data()), 2 * values.size());
  return make(std::move(name), std::move(dims), Dtype::C128, pack(reals), values.size());
}

std::vector<double> Tensor::to_f64() const {
  switch (dtype) {
    case Dtype::F32: {
      const auto v = unpack<float>(payload);
      return {v.begin(), v.end()};
    }
    case Dtype::F64: return unpack<double>(payload);
    default: throw_invalid("tensor " + name + " is complex; expected a real tensor");
  }
}

std::vector<std::complex<double>> Tensor::to_c128() const {
  std::vector<std::complex<double>> out(element_count());
  switch (dtype) {
    case Dtype::F32:
    case Dtype::F64: {
      const auto v = to_f64();
      std::copy(v.begin(), v.end(), out.begin());
      return out;
    }
    case Dtype::C64: {
      const auto v = unpack<float>(payload);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = {v[2 * i], v[2 * i + 1]};
      return out;
    }
    case Dtype::C128: {
      const auto v = unpack<double>(payload);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = {v[2 * i], v[2 * i + 1]};
      return out;
    }
  }
  throw Error(ErrorCode::UnknownDtype, "tensor " + name + " has an unknown dtype");
}

const Tensor* Container::find(const std::string& name) const noexcept {
  auto it = std::find_if(tensors.begin(), tensors.end(), [&](const Tensor& t) { return t.name == name; });
  return it == tensors.end() ? nullptr : &*it;
}

const Tensor& Container::at(const std::string& name) const {
  const Tensor* t = find(name);
  if (t == nullptr) throw_invalid("container has no tensor named '" + name + "'");
  return *t;
}

std::vector<std::uint8_t> encode_container(const Container& c) {
  std::vector<std::uint8_t> out{'P', 'A', 'W', 'S'};
  put_uint<std::uint32_t>(out, kContainerVersion);
  const std::string meta = c.metadata.dump();
  require(meta.size() <= std::numeric_limits<std::uint32_t>::max(), "metadata block too large");
  put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(meta.size()));
  out.insert(out.end(), meta.begin(), meta.end());
  require(c.tensors.size() <= std::numeric_limits<std::uint32_t>::max(), "too many tensors");
  put_uint<std::uint32_t>(out, static_cast<std::uint32_t>(c.tensors.size()));
  for (const Tensor& t : c.tensors) {
    require(!t.name.empty() && t.name.size() <= std::numeric_limits<std::uint16_t>::max(),
            "tensor names must be 1 to 65535 bytes");
    require(t.dims.size() <= std::numeric_limits<std::uint8_t>::max(), "tensor rank exceeds 255");
    if (t.payload.size() != t.element_count() * dtype_size(t.dtype)) {
      throw Error(ErrorCode::LengthMismatch, "tensor " + t.name + " payload does not match its dimensions");
    }
    put_uint<std::uint16_t>(out, static_cast<std::uint16_t>(t.name.size()));
    out.insert(out.end(), t.name.begin(), t.name.end());
    out.push_back(static_cast<std::uint8_t>(t.dims.size()));
    for (std::uint32_t d : t.dims) put_uint<std::uint32_t>(out, d);
    out.push_back(static_cast<std::uint8_t>(t.dtype));
    out.insert(out.end(), t.payload.begin(), t.payload.end());
  }
  return out;
}

Container decode_container(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const std::uint8_t* magic = r.take(4, "the magic number");
  if (std::memcmp(magic, "PAWS", 4) != 0) throw Error(ErrorCode::BadMagic, "not a PAWS container", 0);
  const std::size_t version_at = r.offset();
  const auto version = r.uint<std::uint32_t>("the version field");
  if (version != kContainerVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "container version " + std::to_string(version) + ", expected " + std::to_string(kContainerVersion),
                version_at);
  }
  const auto meta_len = r.uint<std::uint32_t>("the metadata length");
  const std::size_t meta_at = r.offset();
  const std::uint8_t* meta = r.take(meta_len, "the metadata block");
  Container c;
  try {
    c.metadata = nlohmann::json::parse(meta, meta + meta_len);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("metadata is not valid JSON: ") + e.what(), meta_at + e.byte - 1);
  }
  const auto count = r.uint<std::uint32_t>("the tensor count");
  c.tensors.reserve(std::min<std::size_t>(count, r.remaining()));
  for (std::uint32_t i = 0; i < count; ++i) {
    Tensor t;
    const auto name_len = r.uint<std::uint16_t>("a tensor name length");
    const std::uint8_t* name = r.take(name_len, "a tensor name");
    t.name.assign(reinterpret_cast<const char*>(name), name_len);
    const auto rank = r.uint<std::uint8_t>("a tensor rank");
    t.dims.resize(rank);
    for (auto& d : t.dims) d = r.uint<std::uint32_t>("tensor dimensions");
    const std::size_t dtype_at = r.offset();
    const auto tag = r.uint<std::uint8_t>("a dtype tag");
    if (tag < 1 || tag > 4) {
      throw Error(ErrorCode::UnknownDtype, "tensor " + t.name + " has unknown dtype tag " + std::to_string(tag),
                  dtype_at);
    }
    t.dtype = static_cast<Dtype>(tag);
    const std::size_t n = t.element_count();
    const std::size_t esize = dtype_size(t.dtype);
    if (n != 0 && n > r.remaining() / esize) {
      throw Error(ErrorCode::Truncated,
                  "tensor " + t.name + " declares " + std::to_string(n) + " elements but only " +
                      std::to_string(r.remaining()) + " bytes remain",
                  r.offset());
    }
    const std::uint8_t* payload = r.take(n * esize, "a tensor payload");
    t.payload.assign(payload, payload + n * esize);
    c.tensors.push_back(std::move(t));
  }
  if (r.remaining() != 0) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(r.remaining()) + " bytes follow the last declared tensor", r.offset());
  }
  return c;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (f.bad()) throw Error(ErrorCode::Io, "read error on " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(ErrorCode::Io, "short write to " + path.string());
}

void save_container(const std::filesystem::path& path, const Container& container) {
  write_file(path, encode_container(container));
}

Container load_container(const std::filesystem::path& path) { return decode_container(read_file(path)); }

}  // namespace pawsim
