// Copyright 2026 The colcache Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "colcache/common/error.h"

namespace colcache {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;

template <typename T>
  requires std::is_integral_v<T>
inline T byteswap_if_big(T v) noexcept {
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    T out{};
    auto* src = reinterpret_cast<const uint8_t*>(&v);
    auto* dst = reinterpret_cast<uint8_t*>(&out);
    for (size_t i = 0; i < sizeof(T); ++i) dst[i] = src[sizeof(T) - 1 - i];
    return out;
  } else {
    return v;
  }
}

/// Unaligned little-endian load.
template <typename T>
  requires std::is_integral_v<T>
inline T load_le(const uint8_t* p) noexcept {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return byteswap_if_big(v);
}

template <typename T>
  requires std::is_integral_v<T>
inline void store_le(uint8_t* p, T v) noexcept {
  v = byteswap_if_big(v);
  std::memcpy(p, &v, sizeof(T));
}

inline uint64_t double_bits(double d) noexcept { return std::bit_cast<uint64_t>(d); }
inline double bits_double(uint64_t b) noexcept { return std::bit_cast<double>(b); }

inline std::string_view as_string_view(ByteSpan s) noexcept {
  return {reinterpret_cast<const char*>(s.data()), s.size()};
}

inline ByteSpan as_bytes(std::string_view s) noexcept {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

/// Append-only little-endian encoder.
class ByteWriter {
 public:
  ByteWriter() = default;
  explicit ByteWriter(size_t reserve) { buf_.reserve(reserve); }

  void u8(uint8_t v) { buf_.push_back(v); }
  void u16(uint16_t v) { put(v); }
  void u32(uint32_t v) { put(v); }
  void u64(uint64_t v) { put(v); }
  void i64(int64_t v) { put(static_cast<uint64_t>(v)); }
  void f64(double v) { put(double_bits(v)); }
  void bytes(ByteSpan s) { buf_.insert(buf_.end(), s.begin(), s.end()); }
  void str(std::string_view s) { bytes(as_bytes(s)); }
  void zeros(size_t n) { buf_.resize(buf_.size() + n, 0); }

  size_t size() const noexcept { return buf_.size(); }
  Bytes& buffer() noexcept { return buf_; }
  Bytes take() && { return std::move(buf_); }

 private:
  template <typename T>
  void put(T v) {
    size_t at = buf_.size();
    buf_.resize(at + sizeof(T));
    store_le(buf_.data() + at, v);
  }

  Bytes buf_;
};

/// Bounds-checked little-endian decoder. Every failure is a ParseError whose
/// offset is where the input ran out or the bad field starts.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan in) noexcept : in_(in) {}

  uint8_t u8() { return get<uint8_t>(); }
  uint16_t u16() { return get<uint16_t>(); }
  uint32_t u32() { return get<uint32_t>(); }
  uint64_t u64() { return get<uint64_t>(); }
  int64_t i64() { return static_cast<int64_t>(get<uint64_t>()); }
  double f64() { return bits_double(get<uint64_t>()); }

  ByteSpan bytes(uint64_t n) {
    require(n);
    ByteSpan out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  std::string str(uint64_t n) {
    auto b = bytes(n);
    return std::string(as_string_view(b));
  }

  size_t position() const noexcept { return pos_; }
  size_t remaining() const noexcept { return in_.size() - pos_; }
  bool done() const noexcept { return pos_ == in_.size(); }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, size_t offset) const {
    throw ParseError(what, offset);
  }

  void expect_done(const char* what) const {
    if (!done()) fail(std::string("trailing bytes after ") + what);
  }

 private:
  void require(uint64_t n) const {
    if (n > in_.size() - pos_) throw ParseError("truncated input", in_.size());
  }

  template <typename T>
  T get() {
    require(sizeof(T));
    T v = load_le<T>(in_.data() + pos_);
    pos_ += sizeof(T);
    return v;
  }

  ByteSpan in_;
  size_t pos_ = 0;
};

}  // namespace colcache
