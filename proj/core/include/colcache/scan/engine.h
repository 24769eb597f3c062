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

#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "colcache/colfile/reader.h"
#include "colcache/colfile/types.h"
#include "colcache/metacache/cache.h"
#include "colcache/metacache/object_buffer.h"
#include "colcache/scan/predicate.h"

namespace colcache::scan {

/// How metadata sections are served.
///   kNone:    read, inflate and parse from storage on every access.
///   kBytes:   cache the inflated canonical bytes; a hit re-parses them.
///   kObjects: cache object buffers; a hit is an O(1) decode.
enum class CacheMode : uint8_t { kNone, kBytes, kObjects };

std::string_view cache_mode_name(CacheMode m) noexcept;
std::optional<CacheMode> parse_cache_mode(std::string_view s) noexcept;

/// File footer as either a parsed struct or a view over a cached buffer.
class FooterMeta {
 public:
  explicit FooterMeta(colfile::FileFooter f) : rep_(std::move(f)) {}
  explicit FooterMeta(metacache::FooterView v) : rep_(std::move(v)) {}

  uint64_t num_rows() const;
  uint32_t num_columns() const;
  uint32_t num_stripes() const;
  colfile::ColumnType column_type(uint32_t i) const;
  colfile::StripeInfo stripe(uint32_t i) const;
  colfile::StatsRef file_stats(uint32_t i) const;

  bool is_view() const noexcept { return rep_.index() == 1; }
  colfile::FileFooter materialize() const;

 private:
  std::variant<colfile::FileFooter, metacache::FooterView> rep_;
};

/// Stripe footer and stripe index of one stripe, each struct- or view-backed.
class StripeMeta {
 public:
  using FooterRep = std::variant<colfile::StripeFooter, metacache::StripeFooterView>;
  using IndexRep = std::variant<colfile::StripeIndex, metacache::StripeIndexView>;

  StripeMeta(FooterRep footer, IndexRep index) : footer_(std::move(footer)), index_(std::move(index)) {}

  colfile::StreamInfo stream(uint32_t column) const;
  uint32_t num_row_groups() const;
  colfile::StatsRef stripe_stats(uint32_t column) const;
  colfile::StatsRef row_group_stats(uint32_t column, uint32_t group) const;
  uint64_t row_group_offset(uint32_t column, uint32_t group) const;

  colfile::StripeFooter footer() const;
  colfile::StripeIndex index() const;

 private:
  FooterRep footer_;
  IndexRep index_;
};

struct FileState;

/// An opened file: identity, footer metadata and a lazily opened reader.
/// Cheap to copy; safe to share across threads.
class FileHandle {
 public:
  FileHandle() = default;
  explicit FileHandle(std::shared_ptr<const FileState> s) : state_(std::move(s)) {}

  const std::string& identity() const;
  uint64_t file_id() const;
  const FooterMeta& footer() const;
  std::span<const colfile::ColumnType> column_types() const;
  const colfile::FileReader& reader() const;

 private:
  std::shared_ptr<const FileState> state_;
};

/// One stripe of one file.
struct Split {
  FileHandle file;
  uint32_t stripe = 0;
};

enum class AggKind : uint8_t { kCount, kSum, kMin, kMax };

std::string_view agg_name(AggKind k) noexcept;

/// kCount counts matching rows (COUNT(*)) and ignores `column`. kSum needs a
/// numeric column; kMin/kMax skip nulls and NaN.
struct Aggregate {
  AggKind kind = AggKind::kCount;
  uint32_t column = 0;
};

struct ScanResult {
  /// count: int64. sum: int64 (wrapping) or double. min/max: the column's
  /// type, or monostate when no non-null row matched.
  colfile::Scalar value;
  uint64_t rows_scanned = 0;
  uint64_t rows_matched = 0;
  uint64_t row_groups_scanned = 0;
  uint64_t row_groups_skipped = 0;
  uint64_t stripes_skipped = 0;

  friend bool operator==(const ScanResult&, const ScanResult&) = default;
};

/// Folds `part` into `acc`. Folding is order-sensitive for float sums, so
/// callers fold splits in dataset order.
void fold_into(ScanResult& acc, const ScanResult& part, AggKind kind);

/// Identity element for `kind` over a column of type `type`.
ScanResult empty_result(AggKind kind, colfile::ColumnType type);

struct QueryResult {
  ScanResult result;
  metacache::CacheStats stats_delta;
};

/// Raised by run_query; carries the failing file's identity.
class QueryFileError : public Error {
 public:
  QueryFileError(std::string identity, const std::string& cause);
  const std::string& identity() const noexcept { return identity_; }

 private:
  std::string identity_;
};

/// Split-based scanner. Every metadata section (footer, stripe footer,
/// stripe index) is loaded through the cache according to the mode; caching
/// is read-through, populated on the first miss.
class ScanEngine {
 public:
  using WarningSink = std::function<void(const std::string&)>;

  /// `cache` may be null only in kNone mode; cost counters then live in a
  /// private unbounded cache that is never read or written.
  ScanEngine(std::shared_ptr<metacache::MetadataCache> cache, CacheMode mode);

  CacheMode mode() const noexcept { return mode_; }
  metacache::MetadataCache& cache() const noexcept { return *cache_; }
  void set_warning_sink(WarningSink sink) { warn_ = std::move(sink); }

  /// Identity is the absolute path plus size and mtime.
  FileHandle open_file(const std::filesystem::path& path) const;
  /// For sources that are not files; `identity` stands in for the path.
  FileHandle open_file(std::shared_ptr<const colfile::FileReader> reader, std::string identity,
                       uint64_t mtime_ns = 0) const;

  StripeMeta load_stripe_metadata(const FileHandle& file, uint32_t stripe) const;

  std::vector<Split> splits(const FileHandle& file) const;

  ScanResult scan_split(const Split& split, const Predicate& p, const Aggregate& agg) const;

  /// Scans every split of every file with `workers` threads and folds the
  /// results in file/stripe order.
  QueryResult run_query(std::span<const std::filesystem::path> dataset, const Predicate& p,
                        const Aggregate& agg, unsigned workers = 1) const;
  QueryResult run_query(std::span<const FileHandle> files, const Predicate& p, const Aggregate& agg,
                        unsigned workers = 1) const;

 private:
  FileHandle open_with_reader(std::string identity, uint64_t file_id,
                              std::shared_ptr<const colfile::FileReader> reader,
                              std::filesystem::path path) const;
  template <typename Struct, typename View, typename Fetch, typename Parse, typename Encode, typename Decode>
  std::variant<Struct, View> load_section(const metacache::CacheKey& key, Fetch&& fetch, Parse&& parse,
                                          Encode&& encode, Decode&& decode) const;
  void warn(const std::string& msg) const;

  std::shared_ptr<metacache::MetadataCache> cache_;
  CacheMode mode_;
  WarningSink warn_;
};

}  // namespace colcache::scan
