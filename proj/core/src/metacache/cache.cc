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

#include "colcache/metacache/cache.h"

#include <algorithm>

#include "colcache/common/error.h"
#include "colcache/metacache/object_buffer.h"

namespace colcache::metacache {

CacheStats CacheStats::delta(const CacheStats& before, const CacheStats& after) noexcept {
  CacheStats d;
  d.hits = after.hits - before.hits;
  d.misses = after.misses - before.misses;
  d.puts = after.puts - before.puts;
  d.evictions = after.evictions - before.evictions;
  d.bytes_cached = after.bytes_cached;
  d.entries = after.entries;
  d.inflate_count = after.inflate_count - before.inflate_count;
  d.deserialize_count = after.deserialize_count - before.deserialize_count;
  d.encode_count = after.encode_count - before.encode_count;
  d.decode_count = after.decode_count - before.decode_count;
  return d;
}

std::shared_ptr<MetadataCache> MetadataCache::open(const CacheConfig& config) {
  return std::make_shared<MetadataCache>(config);
}

MetadataCache::MetadataCache(const CacheConfig& config) : config_(config) {
  if (config_.capacity_bytes == 0) throw PreconditionError("cache capacity must be > 0");
  if (config_.backend == BackendKind::kDiskDir) {
    if (config_.dir.empty()) throw BackendError("disk backend needs a directory");
    disk_ = std::make_unique<DiskStore>(config_.dir);
    reload_from_disk();
  }
}

void MetadataCache::reload_from_disk() {
  std::vector<CacheKey> victims;
  {
    std::lock_guard lock(mu_);
    for (auto& stored : disk_->load_all()) {
      Entry e;
      e.kind = is_valid_object_buffer(stored.payload, stored.key.kind) ? ValueKind::kObjectBuffer
                                                                         : ValueKind::kRawDecompressed;
      e.charge = stored.payload.size();
      e.book = {stored.insert_seq, stored.access_seq, 1};
      seq_ = std::max({seq_, stored.insert_seq, stored.access_seq});
      order_.insert(order_key(stored.key, e));
      bytes_cached_ += e.charge;
      entries_.emplace(stored.key, std::move(e));
    }
    while (bytes_cached_ > config_.capacity_bytes) {
      auto it = entries_.find(order_.begin()->second);
      victims.push_back(it->first);
      erase_locked(it);
      ++evictions_;
    }
  }
  for (const auto& k : victims) disk_->remove(k);
}

void MetadataCache::erase_locked(std::unordered_map<CacheKey, Entry, CacheKeyHash>::iterator it) {
  order_.erase(order_key(it->first, it->second));
  bytes_cached_ -= it->second.charge;
  entries_.erase(it);
}

std::vector<CacheKey> MetadataCache::insert_locked(const CacheKey& key, Entry entry) {
  if (auto old = entries_.find(key); old != entries_.end()) erase_locked(old);
  bytes_cached_ += entry.charge;
  order_.insert(order_key(key, entry));
  entries_.emplace(key, std::move(entry));

  std::vector<CacheKey> victims;
  while (bytes_cached_ > config_.capacity_bytes) {
    auto pos = order_.begin();
    if (pos->second == key) ++pos;
    // charge <= capacity, so some other entry is always left to evict.
    auto it = entries_.find(pos->second);
    victims.push_back(it->first);
    erase_locked(it);
    ++evictions_;
  }
  ++puts_;
  return victims;
}

void MetadataCache::trace_locked(TraceEvent ev) {
  if (tracing_) trace_.push_back(ev);
}

std::optional<CacheValue> MetadataCache::get(const CacheKey& key) {
  if (!disk_) {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      ++misses_;
      trace_locked({TraceEvent::Op::kGet, key, 0, false});
      return std::nullopt;
    }
    Entry& e = it->second;
    order_.erase(order_key(key, e));
    e.book.access_seq = ++seq_;
    ++e.book.access_count;
    order_.insert(order_key(key, e));
    ++hits_;
    trace_locked({TraceEvent::Op::kGet, key, 0, true});
    return CacheValue{e.kind, e.resident};
  }

  std::lock_guard io_lock(key_lock(key));
  {
    std::lock_guard lock(mu_);
    if (!entries_.contains(key)) {
      ++misses_;
      trace_locked({TraceEvent::Op::kGet, key, 0, false});
      return std::nullopt;
    }
  }
  Bytes payload;
  try {
    payload = disk_->read_payload(key);
  } catch (const BackendError&) {
    std::lock_guard lock(mu_);
    ++misses_;
    trace_locked({TraceEvent::Op::kGet, key, 0, false});
    throw;
  }
  uint64_t access_seq;
  ValueKind kind;
  {
    std::lock_guard lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      // Evicted by another key's put while we were reading.
      ++misses_;
      trace_locked({TraceEvent::Op::kGet, key, 0, false});
      return std::nullopt;
    }
    Entry& e = it->second;
    order_.erase(order_key(key, e));
    access_seq = e.book.access_seq = ++seq_;
    ++e.book.access_count;
    order_.insert(order_key(key, e));
    kind = e.kind;
    ++hits_;
    trace_locked({TraceEvent::Op::kGet, key, 0, true});
  }
  try {
    disk_->touch(key, access_seq);
  } catch (const BackendError&) {
    // Recency is best effort on disk; the in-memory order is authoritative.
  }
  return CacheValue{kind, std::make_shared<const Bytes>(std::move(payload))};
}

std::vector<CacheKey> MetadataCache::put(const CacheKey& key, CacheValue value) {
  if (!value.payload) throw PreconditionError("cache value has no payload");
  const uint64_t charge = value.charge();
  if (charge > config_.capacity_bytes) {
    throw OversizeError("value of " + std::to_string(charge) + " bytes exceeds cache capacity of " +
                        std::to_string(config_.capacity_bytes));
  }
  if (value.kind == ValueKind::kObjectBuffer) validate_object_buffer(*value.payload, key.kind);

  Entry entry{value.kind, charge, {}, nullptr};
  if (!disk_) {
    std::lock_guard lock(mu_);
    uint64_t seq = ++seq_;
    entry.book = {seq, seq, 1};
    entry.resident = std::move(value.payload);
    trace_locked({TraceEvent::Op::kPut, key, charge, false});
    return insert_locked(key, std::move(entry));
  }

  std::vector<CacheKey> victims;
  {
    std::lock_guard io_lock(key_lock(key));
    {
      std::lock_guard lock(mu_);
      uint64_t seq = ++seq_;
      entry.book = {seq, seq, 1};
    }
    disk_->write(key, entry.book, *value.payload);
    std::lock_guard lock(mu_);
    trace_locked({TraceEvent::Op::kPut, key, charge, false});
    victims = insert_locked(key, std::move(entry));
  }
  unlink_victims(victims);
  return victims;
}

void MetadataCache::unlink_victims(const std::vector<CacheKey>& victims) {
  for (const auto& v : victims) {
    std::lock_guard io_lock(key_lock(v));
    {
      std::lock_guard lock(mu_);
      // Re-put between eviction and now: the file on disk is the new value.
      if (entries_.contains(v)) continue;
    }
    try {
      disk_->remove(v);
    } catch (const BackendError&) {
      // A stale file is dropped or overwritten on the next reload or put.
    }
  }
}

CacheStats MetadataCache::stats() const {
  CacheStats s;
  {
    std::lock_guard lock(mu_);
    s.hits = hits_;
    s.misses = misses_;
    s.puts = puts_;
    s.evictions = evictions_;
    s.bytes_cached = bytes_cached_;
    s.entries = entries_.size();
  }
  CostSnapshot c = counters_.snapshot();
  s.inflate_count = c.inflate_count;
  s.deserialize_count = c.deserialize_count;
  s.encode_count = c.encode_count;
  s.decode_count = c.decode_count;
  return s;
}

std::vector<std::pair<CacheKey, uint64_t>> MetadataCache::resident() const {
  std::vector<std::pair<CacheKey, uint64_t>> out;
  {
    std::lock_guard lock(mu_);
    out.reserve(entries_.size());
    for (const auto& [k, e] : entries_) out.emplace_back(k, e.charge);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Bookkeeping> MetadataCache::bookkeeping(const CacheKey& key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.book;
}

void MetadataCache::set_trace_enabled(bool on) {
  std::lock_guard lock(mu_);
  tracing_ = on;
}

std::vector<TraceEvent> MetadataCache::take_trace() {
  std::lock_guard lock(mu_);
  return std::exchange(trace_, {});
}

}  // namespace colcache::metacache
