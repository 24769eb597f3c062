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

#include <gtest/gtest.h>

#include <unordered_set>

#include "colcache/common/error.h"
#include "colcache/common/hash.h"
#include "colcache/metacache/cache_key.h"

namespace colcache::metacache {
namespace {

// The identity fold recomputed from its definition:
// FNV-1a over path, a 0x00 separator, size LE and mtime LE.
uint64_t reference_file_id(std::string_view path, uint64_t size, uint64_t mtime) {
  uint64_t h = 0xCBF29CE484222325ull;
  auto mix = [&h](uint8_t b) { h = (h ^ b) * 0x100000001B3ull; };
  for (char c : path) mix(static_cast<uint8_t>(c));
  mix(0);
  for (int i = 0; i < 8; ++i) mix(static_cast<uint8_t>(size >> (8 * i)));
  for (int i = 0; i < 8; ++i) mix(static_cast<uint8_t>(mtime >> (8 * i)));
  return h;
}

TEST(FileId, MatchesReferenceFold) {
  EXPECT_EQ(make_file_id("/data/a.ocf", 1234, 99), reference_file_id("/data/a.ocf", 1234, 99));
}

TEST(FileId, SizeChangesId) {
  EXPECT_NE(make_file_id("/data/a.ocf", 1234, 99), make_file_id("/data/a.ocf", 1235, 99));
  EXPECT_EQ(make_file_id("/data/a.ocf", 1235, 99), reference_file_id("/data/a.ocf", 1235, 99));
}

TEST(FileId, EmptyPathRejected) { EXPECT_THROW(make_file_id("", 1, 1), PreconditionError); }

TEST(CacheKey, WireFormat) {
  CacheKey k = CacheKey::stripe_index(0x0102030405060708ull, 0x0A0B0C0D);
  auto w = k.encode();
  const std::array<uint8_t, 13> expected = {8, 7, 6, 5, 4, 3, 2, 1, 2, 0x0D, 0x0C, 0x0B, 0x0A};
  EXPECT_EQ(w, expected);
  EXPECT_EQ(CacheKey::decode(w), k);
}

TEST(CacheKey, DecodeRejectsBadInput) {
  std::array<uint8_t, 13> w = CacheKey::footer(1).encode();
  w[8] = 3;
  EXPECT_FALSE(CacheKey::decode(w));
  w = CacheKey::footer(1).encode();
  w[9] = 1;  // footer keys carry stripe 0
  EXPECT_FALSE(CacheKey::decode(w));
  EXPECT_FALSE(CacheKey::decode(std::span<const uint8_t>(w.data(), 12)));
}

TEST(CacheKey, HexRoundTrip) {
  CacheKey k = CacheKey::stripe_footer(0xFEDCBA9876543210ull, 7);
  EXPECT_EQ(k.hex().size(), 26u);
  EXPECT_EQ(CacheKey::from_hex(k.hex()), k);
  EXPECT_FALSE(CacheKey::from_hex("zz"));
}

TEST(CacheKey, DistinctKeysDistinctHashes) {
  std::unordered_set<size_t> seen;
  for (uint32_t s = 0; s < 100; ++s) {
    seen.insert(CacheKeyHash{}(CacheKey::stripe_footer(42, s)));
    seen.insert(CacheKeyHash{}(CacheKey::stripe_index(42, s)));
  }
  EXPECT_EQ(seen.size(), 200u);
}

}  // namespace
}  // namespace colcache::metacache
