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

#include "colcache/scan/engine.h"

#include <sys/stat.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include "colcache/colfile/compression.h"
#include "colcache/colfile/metadata_codec.h"
#include "colcache/colfile/stats.h"
#include "colcache/common/error.h"

namespace colcache::scan {

using colfile::ColumnChunk;
using colfile::ColumnType;
using colfile::FileFooter;
using colfile::FileReader;
using colfile::Scalar;
using colfile::ScalarRef;
using colfile::StatsRef;
using colfile::StripeFooter;
using colfile::StripeIndex;
using colfile::StripeInfo;
using metacache::CacheKey;
using metacache::CacheValue;
using metacache::FooterView;
using metacache::StripeFooterView;
using metacache::StripeIndexView;
using metacache::ValueKind;

std::string_view cache_mode_name(CacheMode m) noexcept {
  switch (m) {
    case CacheMode::kNone: return "none";
    case CacheMode::kBytes: return "bytes";
    case CacheMode::kObjects: return "objects";
  }
  return "?";
}

std::optional<CacheMode> parse_cache_mode(std::string_view s) noexcept {
  if (s == "none") return CacheMode::kNone;
  if (s == "bytes") return CacheMode::kBytes;
  if (s == "objects") return CacheMode::kObjects;
  return std::nullopt;
}

std::string_view agg_name(AggKind k) noexcept {
  switch (k) {
    case AggKind::kCount: return "count";
    case AggKind::kSum: return "sum";
    case AggKind::kMin: return "min";
    case AggKind::kMax: return "max";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// FooterMeta / StripeMeta

namespace {

template <typename... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <typename... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void require(bool ok, const char* what) {
  if (!ok) throw PreconditionError(what);
}

}  // namespace

uint64_t FooterMeta::num_rows() const {
  return std::visit(Overloaded{[](const FileFooter& f) { return f.num_rows; },
                               [](const FooterView& v) { return v.num_rows(); }},
                    rep_);
}

uint32_t FooterMeta::num_columns() const {
  return std::visit(Overloaded{[](const FileFooter& f) { return static_cast<uint32_t>(f.columns.size()); },
                               [](const FooterView& v) { return v.num_columns(); }},
                    rep_);
}

uint32_t FooterMeta::num_stripes() const {
  return std::visit(Overloaded{[](const FileFooter& f) { return static_cast<uint32_t>(f.stripes.size()); },
                               [](const FooterView& v) { return v.num_stripes(); }},
                    rep_);
}

ColumnType FooterMeta::column_type(uint32_t i) const {
  return std::visit(Overloaded{[i](const FileFooter& f) {
                                 require(i < f.columns.size(), "column index out of range");
                                 return f.columns[i].type;
                               },
                               [i](const FooterView& v) { return v.column_type(i); }},
                    rep_);
}

StripeInfo FooterMeta::stripe(uint32_t i) const {
  return std::visit(Overloaded{[i](const FileFooter& f) {
                                 require(i < f.stripes.size(), "stripe index out of range");
                                 return f.stripes[i];
                               },
                               [i](const FooterView& v) { return v.stripe(i); }},
                    rep_);
}

StatsRef FooterMeta::file_stats(uint32_t i) const {
  return std::visit(Overloaded{[i](const FileFooter& f) {
                                 require(i < f.file_stats.size(), "column index out of range");
                                 return f.file_stats[i].ref();
                               },
                               [i](const FooterView& v) { return v.stats(i); }},
                    rep_);
}

FileFooter FooterMeta::materialize() const {
  return std::visit(Overloaded{[](const FileFooter& f) { return f; },
                               [](const FooterView& v) { return v.materialize(); }},
                    rep_);
}

colfile::StreamInfo StripeMeta::stream(uint32_t column) const {
  return std::visit(Overloaded{[column](const StripeFooter& f) {
                                 require(column < f.streams.size(), "column index out of range");
                                 return f.streams[column];
                               },
                               [column](const StripeFooterView& v) { return v.stream(column); }},
                    footer_);
}

uint32_t StripeMeta::num_row_groups() const {
  return std::visit(Overloaded{[](const StripeIndex& i) { return i.num_row_groups; },
                               [](const StripeIndexView& v) { return v.num_row_groups(); }},
                    index_);
}

StatsRef StripeMeta::stripe_stats(uint32_t column) const {
  return std::visit(Overloaded{[column](const StripeIndex& i) {
                                 require(column < i.columns.size(), "column index out of range");
                                 return i.columns[column].stripe_stats.ref();
                               },
                               [column](const StripeIndexView& v) { return v.stripe_stats(column); }},
                    index_);
}

StatsRef StripeMeta::row_group_stats(uint32_t column, uint32_t group) const {
  return std::visit(Overloaded{[=](const StripeIndex& i) {
                                 require(column < i.columns.size(), "column index out of range");
                                 require(group < i.num_row_groups, "row group index out of range");
                                 return i.columns[column].row_groups[group].stats.ref();
                               },
                               [=](const StripeIndexView& v) { return v.row_group_stats(column, group); }},
                    index_);
}

uint64_t StripeMeta::row_group_offset(uint32_t column, uint32_t group) const {
  return std::visit(Overloaded{[=](const StripeIndex& i) {
                                 require(column < i.columns.size(), "column index out of range");
                                 require(group < i.num_row_groups, "row group index out of range");
                                 return i.columns[column].row_groups[group].byte_offset;
                               },
                               [=](const StripeIndexView& v) { return v.row_group_offset(column, group); }},
                    index_);
}

StripeFooter StripeMeta::footer() const {
  return std::visit(Overloaded{[](const StripeFooter& f) { return f; },
                               [](const StripeFooterView& v) { return v.materialize(); }},
                    footer_);
}

StripeIndex StripeMeta::index() const {
  return std::visit(Overloaded{[](const StripeIndex& i) { return i; },
                               [](const StripeIndexView& v) { return v.materialize(); }},
                    index_);
}

// ---------------------------------------------------------------------------
// FileHandle

struct FileState {
  FileState(std::string id, uint64_t fid, std::filesystem::path p, FooterMeta f, std::vector<ColumnType> t,
            std::shared_ptr<const FileReader> r)
      : identity(std::move(id)),
        file_id(fid),
        path(std::move(p)),
        footer(std::move(f)),
        types(std::move(t)),
        reader(std::move(r)) {}

  std::string identity;
  uint64_t file_id;
  std::filesystem::path path;
  FooterMeta footer;
  std::vector<ColumnType> types;
  mutable std::once_flag once;
  mutable std::shared_ptr<const FileReader> reader;
};

const std::string& FileHandle::identity() const { return state_->identity; }
uint64_t FileHandle::file_id() const { return state_->file_id; }
const FooterMeta& FileHandle::footer() const { return state_->footer; }
std::span<const ColumnType> FileHandle::column_types() const { return state_->types; }

const FileReader& FileHandle::reader() const {
  std::call_once(state_->once, [this] {
    if (!state_->reader) state_->reader = FileReader::open(state_->path);
  });
  return *state_->reader;
}

QueryFileError::QueryFileError(std::string identity, const std::string& cause)
    : Error(identity + ": " + cause), identity_(std::move(identity)) {}

// ---------------------------------------------------------------------------
// ScanEngine: metadata loading

ScanEngine::ScanEngine(std::shared_ptr<metacache::MetadataCache> cache, CacheMode mode)
    : cache_(std::move(cache)), mode_(mode) {
  if (!cache_) {
    if (mode_ != CacheMode::kNone) throw PreconditionError("cache modes bytes/objects need a cache");
    cache_ = metacache::MetadataCache::open({});
  }
}

void ScanEngine::warn(const std::string& msg) const {
  if (warn_) {
    warn_(msg);
  } else {
    std::cerr << "colcache: warning: " << msg << '\n';
  }
}

template <typename Struct, typename View, typename Fetch, typename Parse, typename Encode, typename Decode>
std::variant<Struct, View> ScanEngine::load_section(const CacheKey& key, Fetch&& fetch, Parse&& parse,
                                                    Encode&& encode, Decode&& decode) const {
  if (mode_ != CacheMode::kNone) {
    std::optional<CacheValue> hit;
    try {
      hit = cache_->get(key);
    } catch (const BackendError& e) {
      warn(std::string("cache read failed, reading from storage: ") + e.what());
    }
    const ValueKind want = mode_ == CacheMode::kBytes ? ValueKind::kRawDecompressed : ValueKind::kObjectBuffer;
    if (hit && hit->kind != want) {
      warn("cached section " + key.hex() + " has the other value kind, reading from storage");
    } else if (hit) {
      try {
        if (mode_ == CacheMode::kBytes) return parse(ByteSpan(*hit->payload));
        return decode(ByteSpan(*hit->payload), std::shared_ptr<const void>(hit->payload));
      } catch (const ParseError& e) {
        warn(std::string("cached section unreadable, reading from storage: ") + e.what());
      } catch (const ValidationError& e) {
        warn(std::string("cached section unreadable, reading from storage: ") + e.what());
      }
    }
  }

  Bytes raw = colfile::inflate_section(fetch(), &cache_->counters());
  Struct parsed = parse(ByteSpan(raw));
  if (mode_ != CacheMode::kNone) {
    try {
      if (mode_ == CacheMode::kBytes) {
        cache_->put(key, CacheValue::raw(raw));
      } else {
        cache_->put(key, CacheValue::object(encode(parsed)));
      }
    } catch (const OversizeError& e) {
      warn(std::string("section not cached: ") + e.what());
    } catch (const BackendError& e) {
      warn(std::string("cache write failed: ") + e.what());
    }
  }
  return parsed;
}

FileHandle ScanEngine::open_file(const std::filesystem::path& path) const {
  struct stat st {};
  if (::stat(path.c_str(), &st) != 0) throw IoError("stat " + path.string() + ": " + std::strerror(errno));
  std::string identity = std::filesystem::absolute(path).lexically_normal().string();
  uint64_t mtime_ns = static_cast<uint64_t>(st.st_mtim.tv_sec) * 1'000'000'000ull +
                      static_cast<uint64_t>(st.st_mtim.tv_nsec);
  uint64_t file_id = metacache::make_file_id(identity, static_cast<uint64_t>(st.st_size), mtime_ns);
  return open_with_reader(std::move(identity), file_id, nullptr, path);
}

FileHandle ScanEngine::open_file(std::shared_ptr<const FileReader> reader, std::string identity,
                                 uint64_t mtime_ns) const {
  if (!reader) throw PreconditionError("null reader");
  uint64_t file_id = metacache::make_file_id(identity, reader->size(), mtime_ns);
  return open_with_reader(std::move(identity), file_id, std::move(reader), {});
}

FileHandle ScanEngine::open_with_reader(std::string identity, uint64_t file_id,
                                        std::shared_ptr<const FileReader> reader,
                                        std::filesystem::path path) const {
  CostCounters* counters = &cache_->counters();
  auto get_reader = [&]() -> const FileReader& {
    if (!reader) reader = FileReader::open(path);
    return *reader;
  };
  auto rep = load_section<FileFooter, FooterView>(
      CacheKey::footer(file_id), [&] { return get_reader().read_footer_compressed(); },
      [&](ByteSpan raw) { return colfile::parse_footer(raw, counters); },
      [&](const FileFooter& f) { return metacache::encode_footer_buf(f, counters); },
      [&](ByteSpan buf, std::shared_ptr<const void> anchor) {
        return metacache::decode_footer_view(buf, counters, std::move(anchor));
      });
  FooterMeta footer = std::visit([](auto&& v) { return FooterMeta(std::move(v)); }, std::move(rep));
  std::vector<ColumnType> types;
  types.reserve(footer.num_columns());
  for (uint32_t i = 0; i < footer.num_columns(); ++i) types.push_back(footer.column_type(i));
  return FileHandle(std::make_shared<const FileState>(std::move(identity), file_id, std::move(path),
                                                      std::move(footer), std::move(types), std::move(reader)));
}

StripeMeta ScanEngine::load_stripe_metadata(const FileHandle& file, uint32_t stripe) const {
  const FooterMeta& footer = file.footer();
  if (stripe >= footer.num_stripes()) throw PreconditionError("stripe ordinal out of range");
  const StripeInfo info = footer.stripe(stripe);
  const auto types = file.column_types();
  CostCounters* counters = &cache_->counters();

  auto sfooter = load_section<StripeFooter, StripeFooterView>(
      CacheKey::stripe_footer(file.file_id(), stripe),
      [&] { return file.reader().read_stripe_footer_compressed(info); },
      [&](ByteSpan raw) { return colfile::parse_stripe_footer(raw, counters); },
      [&](const StripeFooter& f) { return metacache::encode_stripe_footer_buf(f, counters); },
      [&](ByteSpan buf, std::shared_ptr<const void> anchor) {
        return metacache::decode_stripe_footer_view(buf, counters, std::move(anchor));
      });
  auto index = load_section<StripeIndex, StripeIndexView>(
      CacheKey::stripe_index(file.file_id(), stripe),
      [&] { return file.reader().read_stripe_index_compressed(info); },
      [&](ByteSpan raw) { return colfile::parse_stripe_index(raw, types, counters); },
      [&](const StripeIndex& i) { return metacache::encode_stripe_index_buf(i, types, counters); },
      [&](ByteSpan buf, std::shared_ptr<const void> anchor) {
        return metacache::decode_stripe_index_view(buf, counters, std::move(anchor));
      });

  uint32_t streams = std::visit(
      Overloaded{[](const StripeFooter& f) { return static_cast<uint32_t>(f.streams.size()); },
                 [](const StripeFooterView& v) { return v.num_columns(); }},
      sfooter);
  uint32_t index_cols = std::visit(
      Overloaded{[](const StripeIndex& i) { return static_cast<uint32_t>(i.columns.size()); },
                 [](const StripeIndexView& v) { return v.num_columns(); }},
      index);
  StripeMeta meta(std::move(sfooter), std::move(index));
  if (streams != types.size() || index_cols != types.size()) {
    throw CorruptFileError("stripe metadata column count disagrees with footer");
  }
  if (meta.num_row_groups() != colfile::row_groups_for(info.num_rows)) {
    throw CorruptFileError("stripe index row group count disagrees with stripe rows");
  }
  return meta;
}

std::vector<Split> ScanEngine::splits(const FileHandle& file) const {
  std::vector<Split> out;
  for (uint32_t s = 0; s < file.footer().num_stripes(); ++s) out.push_back({file, s});
  return out;
}

// ---------------------------------------------------------------------------
// Scanning

ScanResult empty_result(AggKind kind, ColumnType type) {
  ScanResult r;
  switch (kind) {
    case AggKind::kCount: r.value = int64_t{0}; break;
    case AggKind::kSum:
      if (type == ColumnType::kFloat64) {
        r.value = 0.0;
      } else {
        r.value = int64_t{0};
      }
      break;
    case AggKind::kMin:
    case AggKind::kMax: r.value = std::monostate{}; break;
  }
  return r;
}

void fold_into(ScanResult& acc, const ScanResult& part, AggKind kind) {
  acc.rows_scanned += part.rows_scanned;
  acc.rows_matched += part.rows_matched;
  acc.row_groups_scanned += part.row_groups_scanned;
  acc.row_groups_skipped += part.row_groups_skipped;
  acc.stripes_skipped += part.stripes_skipped;
  switch (kind) {
    case AggKind::kCount:
    case AggKind::kSum:
      if (auto* a = std::get_if<int64_t>(&acc.value)) {
        *a = static_cast<int64_t>(static_cast<uint64_t>(*a) + static_cast<uint64_t>(std::get<int64_t>(part.value)));
      } else {
        std::get<double>(acc.value) += std::get<double>(part.value);
      }
      break;
    case AggKind::kMin:
    case AggKind::kMax: {
      if (std::holds_alternative<std::monostate>(part.value)) break;
      if (std::holds_alternative<std::monostate>(acc.value)) {
        acc.value = part.value;
        break;
      }
      int c = colfile::compare_scalars(colfile::as_ref(part.value), colfile::as_ref(acc.value));
      if ((kind == AggKind::kMin && c < 0) || (kind == AggKind::kMax && c > 0)) acc.value = part.value;
      break;
    }
  }
}

namespace {

void check_aggregate(const Aggregate& agg, std::span<const ColumnType> types) {
  if (agg.kind == AggKind::kCount) return;
  if (agg.column >= types.size()) throw SchemaError("aggregate column out of range");
  if (agg.kind == AggKind::kSum && types[agg.column] == ColumnType::kUtf8) {
    throw SchemaError("sum needs a numeric column");
  }
}

ColumnType agg_type(const Aggregate& agg, std::span<const ColumnType> types) {
  return agg.kind == AggKind::kCount ? ColumnType::kInt64 : types[agg.column];
}

/// Sequential reader over one chunk's slots.
struct ColumnCursor {
  const ColumnChunk* chunk = nullptr;
  uint64_t utf8_offset = 0;

  ScalarRef next(uint64_t row) {
    switch (chunk->type()) {
      case ColumnType::kInt64:
        return chunk->is_null(row) ? ScalarRef{} : ScalarRef{chunk->int64_at(row)};
      case ColumnType::kFloat64:
        return chunk->is_null(row) ? ScalarRef{} : ScalarRef{chunk->float64_at(row)};
      case ColumnType::kUtf8: {
        std::string_view s = chunk->utf8_at(utf8_offset);
        return chunk->is_null(row) ? ScalarRef{} : ScalarRef{s};
      }
    }
    return {};
  }
};

/// Running aggregate for one split.
class Accumulator {
 public:
  Accumulator(AggKind kind, ColumnType type) : kind_(kind), type_(type) {}

  void add(const ScalarRef& v) {
    ++count_;
    if (kind_ == AggKind::kCount || std::holds_alternative<std::monostate>(v)) return;
    switch (kind_) {
      case AggKind::kSum:
        if (auto* i = std::get_if<int64_t>(&v)) {
          int_sum_ += static_cast<uint64_t>(*i);
        } else {
          double_sum_ += std::get<double>(v);
        }
        break;
      case AggKind::kMin:
      case AggKind::kMax: {
        if (auto* d = std::get_if<double>(&v); d && std::isnan(*d)) return;
        if (std::holds_alternative<std::monostate>(best_)) {
          best_ = v;
          return;
        }
        int c = colfile::compare_scalars(v, best_);
        if ((kind_ == AggKind::kMin && c < 0) || (kind_ == AggKind::kMax && c > 0)) best_ = v;
        break;
      }
      case AggKind::kCount: break;
    }
  }

  Scalar value() const {
    switch (kind_) {
      case AggKind::kCount: return static_cast<int64_t>(count_);
      case AggKind::kSum:
        if (type_ == ColumnType::kFloat64) return double_sum_;
        return static_cast<int64_t>(int_sum_);
      case AggKind::kMin:
      case AggKind::kMax: return colfile::to_owned(best_);
    }
    return {};
  }

  uint64_t matched() const noexcept { return count_; }

 private:
  AggKind kind_;
  ColumnType type_;
  uint64_t count_ = 0;
  uint64_t int_sum_ = 0;
  double double_sum_ = 0.0;
  ScalarRef best_;
};

}  // namespace

ScanResult ScanEngine::scan_split(const Split& split, const Predicate& p, const Aggregate& agg) const {
  const FileHandle& file = split.file;
  const auto types = file.column_types();
  check_predicate(p, types);
  check_aggregate(agg, types);
  const FooterMeta& footer = file.footer();
  if (split.stripe >= footer.num_stripes()) throw PreconditionError("split stripe out of range");

  const StripeInfo info = footer.stripe(split.stripe);
  const StripeMeta meta = load_stripe_metadata(file, split.stripe);
  const uint32_t groups = meta.num_row_groups();
  ScanResult result = empty_result(agg.kind, agg_type(agg, types));

  auto stripe_stats = [&](uint32_t c) { return meta.stripe_stats(c); };
  if (eval_pushdown(p, stripe_stats, info.num_rows) == Pushdown::kMustSkip) {
    result.stripes_skipped = 1;
    result.row_groups_skipped = groups;
    return result;
  }

  std::vector<bool> keep(groups);
  bool any = false;
  for (uint32_t g = 0; g < groups; ++g) {
    uint64_t first = uint64_t{g} * colfile::kRowGroupRows;
    uint64_t rows = std::min(colfile::kRowGroupRows, info.num_rows - first);
    auto group_stats = [&](uint32_t c) { return meta.row_group_stats(c, g); };
    keep[g] = eval_pushdown(p, group_stats, rows) == Pushdown::kMayMatch;
    any = any || keep[g];
  }
  if (!any) {
    result.row_groups_skipped = groups;
    return result;
  }

  std::vector<uint32_t> needed;
  for (const auto& a : p.atoms) needed.push_back(a.column);
  if (agg.kind != AggKind::kCount) needed.push_back(agg.column);
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());

  // Data chunks are not metadata; their inflates are not counted.
  std::vector<ColumnChunk> chunks;
  chunks.reserve(needed.size());
  for (uint32_t c : needed) chunks.push_back(file.reader().read_column_chunk(info, types[c], meta.stream(c)));

  std::vector<ScalarRef> row_values(types.size());
  std::vector<ColumnCursor> cursors(needed.size());
  for (size_t i = 0; i < needed.size(); ++i) cursors[i].chunk = &chunks[i];

  Accumulator acc(agg.kind, agg_type(agg, types));
  for (uint32_t g = 0; g < groups; ++g) {
    if (!keep[g]) {
      ++result.row_groups_skipped;
      continue;
    }
    ++result.row_groups_scanned;
    const uint64_t first = uint64_t{g} * colfile::kRowGroupRows;
    const uint64_t end = std::min(first + colfile::kRowGroupRows, info.num_rows);
    for (size_t i = 0; i < needed.size(); ++i) {
      if (types[needed[i]] == ColumnType::kUtf8) cursors[i].utf8_offset = meta.row_group_offset(needed[i], g);
    }
    for (uint64_t row = first; row < end; ++row) {
      for (size_t i = 0; i < needed.size(); ++i) row_values[needed[i]] = cursors[i].next(row);
      bool match = true;
      for (const auto& a : p.atoms) {
        if (!eval_atom(a, row_values[a.column])) {
          match = false;
          break;
        }
      }
      if (match) acc.add(agg.kind == AggKind::kCount ? ScalarRef{} : row_values[agg.column]);
    }
    result.rows_scanned += end - first;
  }
  result.rows_matched = acc.matched();
  result.value = acc.value();
  return result;
}

QueryResult ScanEngine::run_query(std::span<const std::filesystem::path> dataset, const Predicate& p,
                                  const Aggregate& agg, unsigned workers) const {
  if (dataset.empty()) throw PreconditionError("dataset is empty");
  const auto before = cache_->stats();
  std::vector<FileHandle> files;
  files.reserve(dataset.size());
  for (const auto& path : dataset) {
    try {
      files.push_back(open_file(path));
    } catch (const Error& e) {
      throw QueryFileError(path.string(), e.what());
    }
  }
  QueryResult r = run_query(files, p, agg, workers);
  r.stats_delta = metacache::CacheStats::delta(before, cache_->stats());
  return r;
}

QueryResult ScanEngine::run_query(std::span<const FileHandle> files, const Predicate& p, const Aggregate& agg,
                                  unsigned workers) const {
  if (files.empty()) throw PreconditionError("dataset is empty");
  const auto before = cache_->stats();

  std::optional<ColumnType> result_type;
  std::vector<Split> all;
  for (const auto& f : files) {
    try {
      check_predicate(p, f.column_types());
      check_aggregate(agg, f.column_types());
    } catch (const Error& e) {
      throw QueryFileError(f.identity(), e.what());
    }
    ColumnType t = agg_type(agg, f.column_types());
    if (result_type && *result_type != t) {
      throw QueryFileError(f.identity(), "aggregate column type differs across files");
    }
    result_type = t;
    auto s = splits(f);
    all.insert(all.end(), s.begin(), s.end());
  }

  std::vector<ScanResult> parts(all.size());
  std::vector<std::exception_ptr> errors(all.size());
  auto run_one = [&](size_t i) {
    try {
      parts[i] = scan_split(all[i], p, agg);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const size_t threads = std::min<size_t>(std::max(1u, workers), all.size());
  if (threads <= 1) {
    for (size_t i = 0; i < all.size(); ++i) run_one(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < all.size(); i = next.fetch_add(1)) run_one(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  QueryResult out;
  out.result = empty_result(agg.kind, *result_type);
  for (size_t i = 0; i < all.size(); ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        throw QueryFileError(all[i].file.identity(), e.what());
      }
    }
    fold_into(out.result, parts[i], agg.kind);
  }
  out.stats_delta = metacache::CacheStats::delta(before, cache_->stats());
  return out;
}

}  // namespace colcache::scan
