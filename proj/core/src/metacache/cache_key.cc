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

#include "colcache/metacache/cache_key.h"

#include "colcache/common/bytes.h"
#include "colcache/common/error.h"
#include "colcache/common/hash.h"

namespace colcache::metacache {

std::string_view section_kind_name(SectionKind k) noexcept {
  switch (k) {
    case SectionKind::kFooter: return "footer";
    case SectionKind::kStripeFooter: return "stripe_footer";
    case SectionKind::kStripeIndex: return "stripe_index";
  }
  return "?";
}

uint64_t make_file_id(std::string_view path, uint64_t size, uint64_t mtime_ns) {
  if (path.empty()) throw PreconditionError("file path must not be empty");
  uint8_t tail[17];
  tail[0] = 0;
  store_le(tail + 1, size);
  store_le(tail + 9, mtime_ns);
  return fnv1a64(ByteSpan(tail, sizeof(tail)), fnv1a64(path));
}

std::array<uint8_t, CacheKey::kWireSize> CacheKey::encode() const noexcept {
  std::array<uint8_t, kWireSize> out{};
  store_le(out.data(), file_id);
  out[8] = static_cast<uint8_t>(kind);
  store_le(out.data() + 9, stripe);
  return out;
}

std::optional<CacheKey> CacheKey::decode(std::span<const uint8_t> wire) noexcept {
  if (wire.size() != kWireSize || wire[8] > 2) return std::nullopt;
  CacheKey k{load_le<uint64_t>(wire.data()), static_cast<SectionKind>(wire[8]),
             load_le<uint32_t>(wire.data() + 9)};
  if (k.kind == SectionKind::kFooter && k.stripe != 0) return std::nullopt;
  return k;
}

std::string CacheKey::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  auto wire = encode();
  std::string out;
  out.reserve(kWireSize * 2);
  for (uint8_t b : wire) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

std::optional<CacheKey> CacheKey::from_hex(std::string_view hex) noexcept {
  if (hex.size() != kWireSize * 2) return std::nullopt;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::array<uint8_t, kWireSize> wire{};
  for (size_t i = 0; i < kWireSize; ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    wire[i] = static_cast<uint8_t>(hi << 4 | lo);
  }
  return decode(wire);
}

size_t CacheKeyHash::operator()(const CacheKey& k) const noexcept {
  uint64_t h = k.file_id * 0x9E3779B97F4A7C15ULL;
  h ^= (static_cast<uint64_t>(k.stripe) << 8 | static_cast<uint64_t>(k.kind)) + 0x632BE59BD9B4E019ULL +
       (h << 6) + (h >> 2);
  return static_cast<size_t>(h);
}

}  // namespace colcache::metacache
