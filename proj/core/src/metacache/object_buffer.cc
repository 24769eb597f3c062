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

#include "colcache/metacache/object_buffer.h"

#include <cstring>
#include <limits>

#include "colcache/common/error.h"

namespace colcache::metacache {

using colfile::ColumnStats;
using colfile::ColumnType;
using colfile::ScalarRef;
using colfile::StatsRef;

namespace {

constexpr uint64_t align8(uint64_t n) noexcept { return (n + 7) & ~uint64_t{7}; }

uint32_t checked_u32(uint64_t v) {
  if (v > std::numeric_limits<uint32_t>::max()) throw Error("object buffer exceeds 4 GiB");
  return static_cast<uint32_t>(v);
}

/// String heap; offsets are relative to the heap start.
class Heap {
 public:
  uint64_t add(std::string_view s) {
    uint64_t at = data_.size();
    data_.insert(data_.end(), s.begin(), s.end());
    return at;
  }
  const Bytes& data() const noexcept { return data_; }

 private:
  Bytes data_;
};

void put_header_magic(uint8_t* p, SectionKind kind) {
  std::memcpy(p, kObjectBufferMagic, 4);
  p[4] = static_cast<uint8_t>(kind);
}

void put_stats(uint8_t* rec, const ColumnStats& s, ColumnType type, Heap& heap) {
  rec[0] = static_cast<uint8_t>((s.has_minmax ? 1 : 0) | (static_cast<uint8_t>(type) << 1));
  uint64_t min_bits = 0;
  uint64_t max_bits = 0;
  if (s.has_minmax) {
    auto bits = [&](const colfile::Scalar& v) -> uint64_t {
      if (auto* i = std::get_if<int64_t>(&v)) return static_cast<uint64_t>(*i);
      if (auto* d = std::get_if<double>(&v)) return double_bits(*d);
      if (auto* str = std::get_if<std::string>(&v)) {
        uint64_t off = heap.add(*str);
        return uint64_t{checked_u32(off)} | uint64_t{checked_u32(str->size())} << 32;
      }
      throw PreconditionError("stats with has_minmax set but null min/max");
    };
    min_bits = bits(s.min);
    max_bits = bits(s.max);
  }
  store_le(rec + 8, min_bits);
  store_le(rec + 16, max_bits);
  store_le(rec + 24, s.null_count);
}

uint32_t u32_at(ByteSpan b, size_t off) noexcept { return load_le<uint32_t>(b.data() + off); }
uint64_t u64_at(ByteSpan b, size_t off) noexcept { return load_le<uint64_t>(b.data() + off); }

[[noreturn]] void invalid(const std::string& what) { throw ValidationError("object buffer: " + what); }

void check_table(ByteSpan b, uint64_t off, uint64_t count, uint64_t stride, size_t header,
                 const char* name) {
  if (off % 8 != 0) invalid(std::string(name) + " offset not 8-byte aligned");
  if (off < header) invalid(std::string(name) + " offset overlaps header");
  if (off > b.size() || count * stride > b.size() - off) invalid(std::string(name) + " out of bounds");
}

void check_heap(ByteSpan b, uint64_t off, uint64_t len, size_t header) {
  if (off % 8 != 0) invalid("heap offset not 8-byte aligned");
  if (off < header) invalid("heap offset overlaps header");
  if (off > b.size() || len > b.size() - off) invalid("heap out of bounds");
}

std::string_view heap_string(ByteSpan b, uint32_t heap_off, uint32_t heap_len, uint64_t off,
                             uint64_t len) {
  if (off > heap_len || len > heap_len - off) invalid("string outside heap");
  return as_string_view(b.subspan(heap_off + off, len));
}

StatsRef stats_record(ByteSpan b, const uint8_t* rec, uint32_t heap_off, uint32_t heap_len) {
  StatsRef s;
  uint8_t flags = rec[0];
  s.has_minmax = (flags & 1) != 0;
  s.null_count = load_le<uint64_t>(rec + 24);
  if (!s.has_minmax) return s;
  uint64_t min_bits = load_le<uint64_t>(rec + 8);
  uint64_t max_bits = load_le<uint64_t>(rec + 16);
  auto type = colfile::column_type_from_code(static_cast<uint8_t>((flags >> 1) & 3));
  if (!type) invalid("unknown type code in stats record");
  switch (*type) {
    case ColumnType::kInt64:
      s.min = static_cast<int64_t>(min_bits);
      s.max = static_cast<int64_t>(max_bits);
      break;
    case ColumnType::kFloat64:
      s.min = bits_double(min_bits);
      s.max = bits_double(max_bits);
      break;
    case ColumnType::kUtf8:
      s.min = heap_string(b, heap_off, heap_len, min_bits & 0xFFFFFFFFu, min_bits >> 32);
      s.max = heap_string(b, heap_off, heap_len, max_bits & 0xFFFFFFFFu, max_bits >> 32);
      break;
  }
  return s;
}

void check_magic(ByteSpan b, SectionKind kind, size_t header) {
  if (b.size() < header) invalid("shorter than header");
  if (std::memcmp(b.data(), kObjectBufferMagic, 4) != 0) invalid("bad magic");
  if (b[4] != static_cast<uint8_t>(kind)) invalid("section kind mismatch");
}

}  // namespace

// ---------------------------------------------------------------------------
// Encoding

Bytes encode_footer_buf(const colfile::FileFooter& f, CostCounters* counters) {
  using namespace layout;
  if (counters) counters->add_encode();
  const uint64_t ncols = f.columns.size();
  const uint64_t nstripes = f.stripes.size();
  if (f.file_stats.size() != ncols) throw PreconditionError("file_stats length != column count");

  const uint64_t col_off = kFooterHeader;
  const uint64_t stripe_off = col_off + ncols * kColumnRecord;
  const uint64_t stats_off = stripe_off + nstripes * kStripeRecord;
  const uint64_t heap_off = stats_off + ncols * kStatsRecord;

  Bytes out(heap_off, 0);
  Heap heap;
  for (uint64_t i = 0; i < ncols; ++i) {
    uint8_t* rec = out.data() + col_off + i * kColumnRecord;
    const auto& c = f.columns[i];
    rec[0] = static_cast<uint8_t>(c.type);
    store_le(rec + 4, checked_u32(heap.add(c.name)));
    store_le(rec + 8, checked_u32(c.name.size()));
  }
  for (uint64_t i = 0; i < nstripes; ++i) {
    uint8_t* rec = out.data() + stripe_off + i * kStripeRecord;
    const auto& s = f.stripes[i];
    store_le(rec, s.stripe_offset);
    store_le(rec + 8, s.index_len);
    store_le(rec + 16, s.data_len);
    store_le(rec + 24, s.footer_len);
    store_le(rec + 32, s.num_rows);
  }
  for (uint64_t i = 0; i < ncols; ++i) {
    put_stats(out.data() + stats_off + i * kStatsRecord, f.file_stats[i], f.columns[i].type, heap);
  }

  const uint64_t heap_len = heap.data().size();
  out.insert(out.end(), heap.data().begin(), heap.data().end());
  out.resize(align8(out.size()), 0);

  uint8_t* h = out.data();
  put_header_magic(h, SectionKind::kFooter);
  store_le(h + 8, f.version);
  store_le(h + 12, checked_u32(ncols));
  store_le(h + 16, f.num_rows);
  store_le(h + 24, checked_u32(nstripes));
  store_le(h + 32, checked_u32(col_off));
  store_le(h + 36, checked_u32(stripe_off));
  store_le(h + 40, checked_u32(stats_off));
  store_le(h + 44, checked_u32(heap_off));
  store_le(h + 48, checked_u32(heap_len));
  checked_u32(out.size());
  return out;
}

Bytes encode_stripe_footer_buf(const colfile::StripeFooter& f, CostCounters* counters) {
  using namespace layout;
  if (counters) counters->add_encode();
  const uint64_t n = f.streams.size();
  Bytes out(kStripeFooterHeader + n * kStreamRecord, 0);
  put_header_magic(out.data(), SectionKind::kStripeFooter);
  store_le(out.data() + 8, checked_u32(n));
  for (uint64_t i = 0; i < n; ++i) {
    uint8_t* rec = out.data() + kStripeFooterHeader + i * kStreamRecord;
    store_le(rec, f.streams[i].chunk_offset);
    store_le(rec + 8, f.streams[i].chunk_len);
    rec[16] = static_cast<uint8_t>(f.streams[i].encoding);
  }
  checked_u32(out.size());
  return out;
}

Bytes encode_stripe_index_buf(const colfile::StripeIndex& idx, std::span<const ColumnType> types,
                              CostCounters* counters) {
  using namespace layout;
  if (counters) counters->add_encode();
  if (types.size() != idx.columns.size()) throw PreconditionError("type list does not match index columns");
  const uint64_t ncols = idx.columns.size();
  const uint64_t ngroups = idx.num_row_groups;
  const uint64_t stride = kStatsRecord + kRowGroupRecord * ngroups;
  const uint64_t region_off = kStripeIndexHeader;
  const uint64_t heap_off = region_off + ncols * stride;

  Bytes out(heap_off, 0);
  Heap heap;
  for (uint64_t c = 0; c < ncols; ++c) {
    const auto& col = idx.columns[c];
    if (col.row_groups.size() != ngroups) throw PreconditionError("row group count mismatch");
    uint8_t* region = out.data() + region_off + c * stride;
    put_stats(region, col.stripe_stats, types[c], heap);
    for (uint64_t g = 0; g < ngroups; ++g) {
      uint8_t* rec = region + kStatsRecord + g * kRowGroupRecord;
      put_stats(rec, col.row_groups[g].stats, types[c], heap);
      store_le(rec + kStatsRecord, col.row_groups[g].byte_offset);
    }
  }
  const uint64_t heap_len = heap.data().size();
  out.insert(out.end(), heap.data().begin(), heap.data().end());
  out.resize(align8(out.size()), 0);

  uint8_t* h = out.data();
  put_header_magic(h, SectionKind::kStripeIndex);
  store_le(h + 8, checked_u32(ncols));
  store_le(h + 12, checked_u32(ngroups));
  store_le(h + 16, checked_u32(region_off));
  store_le(h + 20, checked_u32(heap_off));
  store_le(h + 24, checked_u32(heap_len));
  checked_u32(out.size());
  return out;
}

// ---------------------------------------------------------------------------
// Validation

void validate_object_buffer(ByteSpan b, SectionKind kind) {
  using namespace layout;
  switch (kind) {
    case SectionKind::kFooter: {
      check_magic(b, kind, kFooterHeader);
      uint64_t ncols = u32_at(b, 12);
      uint64_t nstripes = u32_at(b, 24);
      if (ncols == 0) invalid("footer has no columns");
      if (nstripes == 0) invalid("footer has no stripes");
      check_table(b, u32_at(b, 32), ncols, kColumnRecord, kFooterHeader, "column table");
      check_table(b, u32_at(b, 36), nstripes, kStripeRecord, kFooterHeader, "stripe table");
      check_table(b, u32_at(b, 40), ncols, kStatsRecord, kFooterHeader, "stats table");
      check_heap(b, u32_at(b, 44), u32_at(b, 48), kFooterHeader);
      return;
    }
    case SectionKind::kStripeFooter: {
      check_magic(b, kind, kStripeFooterHeader);
      uint64_t n = u32_at(b, 8);
      if (n == 0) invalid("stripe footer has no streams");
      check_table(b, kStripeFooterHeader, n, kStreamRecord, kStripeFooterHeader, "stream table");
      return;
    }
    case SectionKind::kStripeIndex: {
      check_magic(b, kind, kStripeIndexHeader);
      uint64_t ncols = u32_at(b, 8);
      uint64_t ngroups = u32_at(b, 12);
      if (ncols == 0) invalid("stripe index has no columns");
      if (ngroups == 0) invalid("stripe index has no row groups");
      check_table(b, u32_at(b, 16), ncols, kStatsRecord + kRowGroupRecord * ngroups, kStripeIndexHeader,
                  "column regions");
      check_heap(b, u32_at(b, 20), u32_at(b, 24), kStripeIndexHeader);
      return;
    }
  }
  invalid("unknown section kind");
}

bool is_valid_object_buffer(ByteSpan buf, SectionKind kind) noexcept {
  try {
    validate_object_buffer(buf, kind);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Views

FooterView decode_footer_view(ByteSpan buf, CostCounters* counters, std::shared_ptr<const void> anchor) {
  if (counters) counters->add_decode();
  validate_object_buffer(buf, SectionKind::kFooter);
  FooterView v;
  v.buf_ = buf;
  v.anchor_ = std::move(anchor);
  return v;
}

uint32_t FooterView::version() const noexcept { return u32_at(buf_, 8); }
uint64_t FooterView::num_rows() const noexcept { return u64_at(buf_, 16); }
uint32_t FooterView::num_columns() const noexcept { return u32_at(buf_, 12); }
uint32_t FooterView::num_stripes() const noexcept { return u32_at(buf_, 24); }

ColumnRef FooterView::column(uint32_t i) const {
  if (i >= num_columns()) throw PreconditionError("column index out of range");
  const uint8_t* rec = buf_.data() + u32_at(buf_, 32) + uint64_t{i} * layout::kColumnRecord;
  auto type = colfile::column_type_from_code(rec[0]);
  if (!type) invalid("unknown column type code");
  return {*type, heap_string(buf_, u32_at(buf_, 44), u32_at(buf_, 48), load_le<uint32_t>(rec + 4),
                             load_le<uint32_t>(rec + 8))};
}

ColumnType FooterView::column_type(uint32_t i) const {
  if (i >= num_columns()) throw PreconditionError("column index out of range");
  auto type = colfile::column_type_from_code(buf_[u32_at(buf_, 32) + uint64_t{i} * layout::kColumnRecord]);
  if (!type) invalid("unknown column type code");
  return *type;
}

colfile::StripeInfo FooterView::stripe(uint32_t i) const {
  if (i >= num_stripes()) throw PreconditionError("stripe index out of range");
  const uint8_t* rec = buf_.data() + u32_at(buf_, 36) + uint64_t{i} * layout::kStripeRecord;
  return {load_le<uint64_t>(rec), load_le<uint64_t>(rec + 8), load_le<uint64_t>(rec + 16),
          load_le<uint64_t>(rec + 24), load_le<uint64_t>(rec + 32)};
}

StatsRef FooterView::stats(uint32_t i) const {
  if (i >= num_columns()) throw PreconditionError("column index out of range");
  const uint8_t* rec = buf_.data() + u32_at(buf_, 40) + uint64_t{i} * layout::kStatsRecord;
  return stats_record(buf_, rec, u32_at(buf_, 44), u32_at(buf_, 48));
}

colfile::FileFooter FooterView::materialize() const {
  colfile::FileFooter f;
  f.version = version();
  f.num_rows = num_rows();
  for (uint32_t i = 0; i < num_columns(); ++i) {
    auto c = column(i);
    f.columns.push_back({std::string(c.name), c.type});
  }
  for (uint32_t i = 0; i < num_stripes(); ++i) f.stripes.push_back(stripe(i));
  for (uint32_t i = 0; i < num_columns(); ++i) {
    auto s = stats(i);
    f.file_stats.push_back({s.has_minmax, colfile::to_owned(s.min), colfile::to_owned(s.max), s.null_count});
  }
  return f;
}

StripeFooterView decode_stripe_footer_view(ByteSpan buf, CostCounters* counters,
                                           std::shared_ptr<const void> anchor) {
  if (counters) counters->add_decode();
  validate_object_buffer(buf, SectionKind::kStripeFooter);
  StripeFooterView v;
  v.buf_ = buf;
  v.anchor_ = std::move(anchor);
  return v;
}

uint32_t StripeFooterView::num_columns() const noexcept { return u32_at(buf_, 8); }

colfile::StreamInfo StripeFooterView::stream(uint32_t column) const {
  if (column >= num_columns()) throw PreconditionError("column index out of range");
  const uint8_t* rec = buf_.data() + layout::kStripeFooterHeader + uint64_t{column} * layout::kStreamRecord;
  if (rec[16] != static_cast<uint8_t>(colfile::Encoding::kPlain)) invalid("unknown stream encoding");
  return {load_le<uint64_t>(rec), load_le<uint64_t>(rec + 8), colfile::Encoding::kPlain};
}

colfile::StripeFooter StripeFooterView::materialize() const {
  colfile::StripeFooter f;
  for (uint32_t i = 0; i < num_columns(); ++i) f.streams.push_back(stream(i));
  return f;
}

StripeIndexView decode_stripe_index_view(ByteSpan buf, CostCounters* counters,
                                         std::shared_ptr<const void> anchor) {
  if (counters) counters->add_decode();
  validate_object_buffer(buf, SectionKind::kStripeIndex);
  StripeIndexView v;
  v.buf_ = buf;
  v.anchor_ = std::move(anchor);
  return v;
}

uint32_t StripeIndexView::num_columns() const noexcept { return u32_at(buf_, 8); }
uint32_t StripeIndexView::num_row_groups() const noexcept { return u32_at(buf_, 12); }

const uint8_t* StripeIndexView::region(uint32_t column) const {
  if (column >= num_columns()) throw PreconditionError("column index out of range");
  uint64_t stride = layout::kStatsRecord + layout::kRowGroupRecord * uint64_t{num_row_groups()};
  return buf_.data() + u32_at(buf_, 16) + column * stride;
}

StatsRef StripeIndexView::read_stats(const uint8_t* rec) const {
  return stats_record(buf_, rec, u32_at(buf_, 20), u32_at(buf_, 24));
}

StatsRef StripeIndexView::stripe_stats(uint32_t column) const { return read_stats(region(column)); }

StatsRef StripeIndexView::row_group_stats(uint32_t column, uint32_t group) const {
  const uint8_t* r = region(column);
  if (group >= num_row_groups()) throw PreconditionError("row group index out of range");
  return read_stats(r + layout::kStatsRecord + uint64_t{group} * layout::kRowGroupRecord);
}

uint64_t StripeIndexView::row_group_offset(uint32_t column, uint32_t group) const {
  const uint8_t* r = region(column);
  if (group >= num_row_groups()) throw PreconditionError("row group index out of range");
  return load_le<uint64_t>(r + layout::kStatsRecord + uint64_t{group} * layout::kRowGroupRecord +
                           layout::kStatsRecord);
}

colfile::StripeIndex StripeIndexView::materialize() const {
  colfile::StripeIndex idx;
  idx.num_row_groups = num_row_groups();
  auto own = [](const StatsRef& s) {
    return ColumnStats{s.has_minmax, colfile::to_owned(s.min), colfile::to_owned(s.max), s.null_count};
  };
  for (uint32_t c = 0; c < num_columns(); ++c) {
    colfile::ColumnIndex col;
    col.stripe_stats = own(stripe_stats(c));
    for (uint32_t g = 0; g < num_row_groups(); ++g) {
      col.row_groups.push_back({own(row_group_stats(c, g)), row_group_offset(c, g)});
    }
    idx.columns.push_back(std::move(col));
  }
  return idx;
}

}  // namespace colcache::metacache
