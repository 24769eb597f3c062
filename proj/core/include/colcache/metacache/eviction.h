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
#include <optional>
#include <span>
#include <string_view>
#include <tuple>

#include "colcache/metacache/cache_key.h"

namespace colcache::metacache {

enum class EvictionPolicy : uint8_t { kFifo, kLru, kLfu };

std::string_view policy_name(EvictionPolicy p) noexcept;
std::optional<EvictionPolicy> parse_policy(std::string_view name) noexcept;

/// Per-entry state the policies look at. Sequence numbers come from one
/// cache-wide counter that advances on every put and every hit.
struct Bookkeeping {
  uint64_t insert_seq = 0;
  uint64_t access_seq = 0;
  uint64_t access_count = 1;
};

/// Eviction priority: the entry with the smallest rank goes first.
///   FIFO: insert_seq
///   LRU:  access_seq
///   LFU:  (access_count, access_seq, insert_seq)
using EvictionRank = std::tuple<uint64_t, uint64_t, uint64_t>;
EvictionRank eviction_rank(EvictionPolicy policy, const Bookkeeping& b) noexcept;

struct Candidate {
  CacheKey key;
  Bookkeeping book;
};

/// Pure victim choice over `candidates` (must be non-empty).
CacheKey select_victim(EvictionPolicy policy, std::span<const Candidate> candidates);

}  // namespace colcache::metacache
