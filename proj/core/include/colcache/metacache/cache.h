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
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "colcache/common/bytes.h"
#include "colcache/common/cost_counters.h"
#include "colcache/metacache/cache_key.h"
#include "colcache/metacache/disk_store.h"
#include "colcache/metacache/eviction.h"

namespace colcache::metacache {

/// What a cached payload holds: the canonical decompressed section bytes, or
/// an object buffer of the same section.
enum class ValueKind : uint8_t { kRawDecompressed = 0, kObjectBuffer = 1 };

struct CacheValue {
  ValueKind kind = ValueKind::kRawDecompressed;
  std::shared_ptr<const Bytes> payload;

  static CacheValue raw(Bytes b) {
    return {ValueKind::kRawDecompressed, std::make_shared<const Bytes>(std::move(b))};
  }
  static CacheValue object(Bytes b) {
    return {ValueKind::kObjectBuffer, std::make_shared<const Bytes>(std::move(b))};
  }

  /// Bytes charged against capacity: the payload length.
  uint64_t charge() const noexcept { return payload ? payload->size() : 0; }
};

struct CacheStats {
  uint64_t hits = 0;
  uint64_t misses = 0;
  uint64_t puts = 0;
  uint64_t evictions = 0;
  uint64_t bytes_cached = 0;
  uint64_t entries = 0;
  uint64_t inflate_count = 0;
  uint64_t deserialize_count = 0;
  uint64_t encode_count = 0;
  uint64_t decode_count = 0;

  /// Counter-wise difference. bytes_cached and entries are levels, not
  /// counters, and are taken from `after`.
  static CacheStats delta(const CacheStats& before, const CacheStats& after) noexcept;

  friend bool operator==(const CacheStats&, const CacheStats&) = default;
};

enum class BackendKind : uint8_t { kMemory, kDiskDir };

struct CacheConfig {
  BackendKind backend = BackendKind::kMemory;
  std::filesystem::path dir;  // kDiskDir only
  uint64_t capacity_bytes = 64ull << 20;
  EvictionPolicy policy = EvictionPolicy::kLru;
};

/// Access trace entry, recorded in linearization order when tracing is on.
struct TraceEvent {
  enum class Op : uint8_t { kGet, kPut };
  Op op;
  CacheKey key;
  uint64_t charge = 0;  // puts only
  bool hit = false;     // gets only
};

/// Byte-budgeted metadata cache with FIFO/LRU/LFU eviction over a memory or
/// directory backend.
///
/// Thread-safe. The entry table is guarded by one mutex that is never held
/// across file I/O; directory-backend I/O is serialized per key through a
/// small array of striped locks instead.
class MetadataCache {
 public:
  /// Memory: starts empty. DiskDir: reloads the directory, rebuilds FIFO/LRU
  /// order from the stored sequence numbers, resets LFU counts to 1, then
  /// evicts down to capacity. Throws PreconditionError for zero capacity and
  /// BackendError for an unusable directory.
  static std::shared_ptr<MetadataCache> open(const CacheConfig& config);

  explicit MetadataCache(const CacheConfig& config);
  MetadataCache(const MetadataCache&) = delete;
  MetadataCache& operator=(const MetadataCache&) = delete;

  /// Hit: returns the stored value and refreshes the entry's recency and
  /// frequency. Miss: counts a miss, changes nothing. Throws BackendError if
  /// the directory backend cannot read a resident entry (counted as a miss).
  std::optional<CacheValue> get(const CacheKey& key);

  /// Stores (or replaces) `key`, then evicts other entries in policy order
  /// until the charge sum fits. Returns the evicted keys. Throws
  /// OversizeError, leaving the cache unchanged, if the value alone exceeds
  /// capacity.
  std::vector<CacheKey> put(const CacheKey& key, CacheValue value);

  CacheStats stats() const;
  CostCounters& counters() noexcept { return counters_; }

  uint64_t capacity() const noexcept { return config_.capacity_bytes; }
  EvictionPolicy policy() const noexcept { return config_.policy; }
  BackendKind backend() const noexcept { return config_.backend; }

  /// Resident keys with their charges, sorted by key.
  std::vector<std::pair<CacheKey, uint64_t>> resident() const;
  std::optional<Bookkeeping> bookkeeping(const CacheKey& key) const;

  void set_trace_enabled(bool on);
  std::vector<TraceEvent> take_trace();

 private:
  struct Entry {
    ValueKind kind;
    uint64_t charge;
    Bookkeeping book;
    std::shared_ptr<const Bytes> resident;  // memory backend only
  };
  using OrderKey = std::pair<EvictionRank, CacheKey>;

  void reload_from_disk();
  OrderKey order_key(const CacheKey& key, const Entry& e) const noexcept {
    return {eviction_rank(config_.policy, e.book), key};
  }
  // The helpers below require mu_.
  void erase_locked(std::unordered_map<CacheKey, Entry, CacheKeyHash>::iterator it);
  std::vector<CacheKey> insert_locked(const CacheKey& key, Entry entry);
  void trace_locked(TraceEvent ev);

  std::mutex& key_lock(const CacheKey& key) noexcept {
    return key_locks_[CacheKeyHash{}(key) % key_locks_.size()];
  }
  void unlink_victims(const std::vector<CacheKey>& victims);

  const CacheConfig config_;
  std::unique_ptr<DiskStore> disk_;
  CostCounters counters_;

  mutable std::mutex mu_;
  std::unordered_map<CacheKey, Entry, CacheKeyHash> entries_;
  std::set<OrderKey> order_;
  uint64_t seq_ = 0;
  uint64_t bytes_cached_ = 0;
  uint64_t hits_ = 0;
  uint64_t misses_ = 0;
  uint64_t puts_ = 0;
  uint64_t evictions_ = 0;
  bool tracing_ = false;
  std::vector<TraceEvent> trace_;

  std::array<std::mutex, 64> key_locks_;
};

}  // namespace colcache::metacache
