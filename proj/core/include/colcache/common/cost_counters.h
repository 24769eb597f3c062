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

#include <atomic>
#include <cstdint>

namespace colcache {

/// Plain-value copy of CostCounters.
struct CostSnapshot {
  uint64_t inflate_count = 0;
  uint64_t deserialize_count = 0;
  uint64_t encode_count = 0;
  uint64_t decode_count = 0;

  friend bool operator==(const CostSnapshot&, const CostSnapshot&) = default;
};

/// Counts the expensive steps on the metadata path: section inflates,
/// canonical-byte parses, object-buffer encodes and object-buffer decodes.
/// Codec functions take an optional pointer to one of these.
class CostCounters {
 public:
  void add_inflate() noexcept { inflate_.fetch_add(1, std::memory_order_relaxed); }
  void add_deserialize() noexcept { deserialize_.fetch_add(1, std::memory_order_relaxed); }
  void add_encode() noexcept { encode_.fetch_add(1, std::memory_order_relaxed); }
  void add_decode() noexcept { decode_.fetch_add(1, std::memory_order_relaxed); }

  CostSnapshot snapshot() const noexcept {
    return {inflate_.load(std::memory_order_relaxed), deserialize_.load(std::memory_order_relaxed),
            encode_.load(std::memory_order_relaxed), decode_.load(std::memory_order_relaxed)};
  }

 private:
  std::atomic<uint64_t> inflate_{0};
  std::atomic<uint64_t> deserialize_{0};
  std::atomic<uint64_t> encode_{0};
  std::atomic<uint64_t> decode_{0};
};

}  // namespace colcache
