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

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace colcache::metacache {

enum class SectionKind : uint8_t { kFooter = 0, kStripeFooter = 1, kStripeIndex = 2 };

std::string_view section_kind_name(SectionKind k) noexcept;

/// FNV-1a 64 over path ‖ 0x00 ‖ size (LE u64) ‖ mtime_ns (LE u64).
/// Throws PreconditionError for an empty path.
uint64_t make_file_id(std::string_view path, uint64_t size, uint64_t mtime_ns);

/// Identifies one cached metadata section: (file, section kind, stripe).
struct CacheKey {
  static constexpr size_t kWireSize = 13;

  uint64_t file_id = 0;
  SectionKind kind = SectionKind::kFooter;
  uint32_t stripe = 0;

  static CacheKey footer(uint64_t file_id) noexcept { return {file_id, SectionKind::kFooter, 0}; }
  static CacheKey stripe_footer(uint64_t file_id, uint32_t stripe) noexcept {
    return {file_id, SectionKind::kStripeFooter, stripe};
  }
  static CacheKey stripe_index(uint64_t file_id, uint32_t stripe) noexcept {
    return {file_id, SectionKind::kStripeIndex, stripe};
  }

  /// u64 file_id ‖ u8 kind ‖ u32 stripe, little-endian.
  std::array<uint8_t, kWireSize> encode() const noexcept;
  /// Rejects unknown kinds and a non-zero stripe on footer keys.
  static std::optional<CacheKey> decode(std::span<const uint8_t> wire) noexcept;

  /// 26 lowercase hex characters of the wire form.
  std::string hex() const;
  static std::optional<CacheKey> from_hex(std::string_view hex) noexcept;

  friend auto operator<=>(const CacheKey&, const CacheKey&) = default;
};

struct CacheKeyHash {
  size_t operator()(const CacheKey& k) const noexcept;
};

}  // namespace colcache::metacache
