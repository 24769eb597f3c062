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
#include <random>
#include <set>
#include <vector>

#include "colcache/colfile/types.h"
#include "colcache/metacache/cache_key.h"
#include "colcache/metacache/eviction.h"
#include "colcache/scan/engine.h"
#include "colcache/scan/predicate.h"

namespace colcache::testing {

using Rng = std::mt19937_64;

/// Straight-line model of the cache's eviction rules: every victim choice
/// scans all resident entries and compares them field by field.
class PolicySimulator {
 public:
  PolicySimulator(metacache::EvictionPolicy policy, uint64_t capacity) : policy_(policy), capacity_(capacity) {}

  /// Returns false (and changes nothing) when charge exceeds capacity.
  bool put(const metacache::CacheKey& key, uint64_t charge);
  bool get(const metacache::CacheKey& key);

  std::set<metacache::CacheKey> resident() const;
  uint64_t bytes() const noexcept;
  uint64_t hits() const noexcept { return hits_; }
  uint64_t misses() const noexcept { return misses_; }
  uint64_t evictions() const noexcept { return evictions_; }

  /// Seeds an entry with explicit bookkeeping, as a reload does.
  void restore(const metacache::CacheKey& key, uint64_t charge, uint64_t insert_seq, uint64_t access_seq);
  /// Evicts until within capacity (reload semantics; nothing is protected).
  void shrink();

 private:
  struct Entry {
    metacache::CacheKey key;
    uint64_t charge;
    uint64_t inserted;
    uint64_t accessed;
    uint64_t uses;
  };
  /// True when `a` should be evicted before `b`.
  bool evict_before(const Entry& a, const Entry& b) const;
  void evict_one(const metacache::CacheKey* protect);

  metacache::EvictionPolicy policy_;
  uint64_t capacity_;
  uint64_t clock_ = 0;
  uint64_t hits_ = 0, misses_ = 0, evictions_ = 0;
  std::vector<Entry> entries_;
};

colfile::Schema random_schema(Rng& rng, uint32_t max_columns = 4);

/// Random cells of the right types. Includes nulls (null_pct percent), and
/// for float columns occasional NaN, infinities and signed zeros when
/// `specials` is set. Int64 values are drawn from [-range, range].
std::vector<colfile::Row> random_rows(Rng& rng, const colfile::Schema& schema, uint64_t n, int null_pct = 10,
                                      bool specials = true, int64_t range = 1000);

colfile::Scalar random_literal(Rng& rng, colfile::ColumnType type, int64_t range = 1000);
scan::Predicate random_predicate(Rng& rng, const colfile::Schema& schema, int64_t range = 1000);
scan::Aggregate random_aggregate(Rng& rng, const colfile::Schema& schema);

colfile::ColumnStats random_stats(Rng& rng, colfile::ColumnType type);
colfile::FileFooter random_footer(Rng& rng);
colfile::StripeFooter random_stripe_footer(Rng& rng);
colfile::StripeIndex random_stripe_index(Rng& rng, std::span<const colfile::ColumnType> types);

struct OracleResult {
  colfile::Scalar value;
  uint64_t matched = 0;
};

/// Evaluates the query directly over the source rows, with no file, stats
/// or pushdown involved. Float sums are accumulated per stripe of
/// `stripe_rows` rows and then added in stripe order.
OracleResult oracle_query(const std::vector<colfile::Row>& rows, const colfile::Schema& schema,
                          const scan::Predicate& p, const scan::Aggregate& agg, uint64_t stripe_rows);

/// Equality that treats two NaNs with equal bits as equal.
bool same_scalar(const colfile::Scalar& a, const colfile::Scalar& b);

}  // namespace colcache::testing
