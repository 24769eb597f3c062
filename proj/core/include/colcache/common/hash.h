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

#include <cstdint>
#include <string_view>

#include "colcache/common/bytes.h"

namespace colcache {

inline constexpr uint64_t kFnv64OffsetBasis = 0xCBF29CE484222325ULL;
inline constexpr uint64_t kFnv64Prime = 0x100000001B3ULL;

/// FNV-1a 64. Pass a previous result as `state` to continue a fold.
uint64_t fnv1a64(ByteSpan data, uint64_t state = kFnv64OffsetBasis) noexcept;

inline uint64_t fnv1a64(std::string_view s, uint64_t state = kFnv64OffsetBasis) noexcept {
  return fnv1a64(as_bytes(s), state);
}

/// 16 lowercase hex digits.
std::string hex64(uint64_t v);

}  // namespace colcache
