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

#include "colcache/metacache/eviction.h"

#include "colcache/common/error.h"

namespace colcache::metacache {

std::string_view policy_name(EvictionPolicy p) noexcept {
  switch (p) {
    case EvictionPolicy::kFifo: return "fifo";
    case EvictionPolicy::kLru: return "lru";
    case EvictionPolicy::kLfu: return "lfu";
  }
  return "?";
}

std::optional<EvictionPolicy> parse_policy(std::string_view name) noexcept {
  if (name == "fifo") return EvictionPolicy::kFifo;
  if (name == "lru") return EvictionPolicy::kLru;
  if (name == "lfu") return EvictionPolicy::kLfu;
  return std::nullopt;
}

EvictionRank eviction_rank(EvictionPolicy policy, const Bookkeeping& b) noexcept {
  switch (policy) {
    case EvictionPolicy::kFifo: return {b.insert_seq, 0, 0};
    case EvictionPolicy::kLru: return {b.access_seq, 0, 0};
    case EvictionPolicy::kLfu: return {b.access_count, b.access_seq, b.insert_seq};
  }
  return {};
}

CacheKey select_victim(EvictionPolicy policy, std::span<const Candidate> candidates) {
  if (candidates.empty()) throw PreconditionError("no evictable entry");
  const Candidate* best = &candidates.front();
  EvictionRank best_rank = eviction_rank(policy, best->book);
  for (const auto& c : candidates.subspan(1)) {
    EvictionRank r = eviction_rank(policy, c.book);
    if (r < best_rank) {
      best = &c;
      best_rank = r;
    }
  }
  return best->key;
}

}  // namespace colcache::metacache
