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

#include "colcache/colfile/metadata_codec.h"

#include <cmath>
#include <limits>

#include "colcache/colfile/stats.h"
#include "colcache/common/error.h"

namespace colcache::colfile {

namespace {

void write_scalar(ByteWriter& w, const Scalar& s) {
  if (auto* i = std::get_if<int64_t>(&s)) {
    w.i64(*i);
  } else if (auto* d = std::get_if<double>(&s)) {
    w.f64(*d);
  } else if (auto* str = std::get_if<std::string>(&s)) {
    if (str->size() > std::numeric_limits<uint32_t>::max()) throw Error("string stat too long");
    w.u32(static_cast<uint32_t>(str->size()));
    w.str(*str);
  } else {
    throw Error("stats min/max must not be null when has_minmax is set");
  }
}

Scalar read_scalar(ByteReader& r, ColumnType type) {
  switch (type) {
    case ColumnType::kInt64: return r.i64();
    case ColumnType::kFloat64: {
      size_t at = r.position();
      double d = r.f64();
      if (std::isnan(d)) r.fail_at("NaN in float64 stats", at);
      return d;
    }
    case ColumnType::kUtf8: {
      uint32_t len = r.u32();
      return r.str(len);
    }
  }
  r.fail("unknown column type");
}

}  // namespace

void write_stats(ByteWriter& w, const ColumnStats& s) {
  w.u8(s.has_minmax ? 1 : 0);
  if (s.has_minmax) {
    write_scalar(w, s.min);
    write_scalar(w, s.max);
  }
  w.u64(s.null_count);
}

ColumnStats read_stats(ByteReader& r, ColumnType type) {
  ColumnStats s;
  size_t at = r.position();
  uint8_t flag = r.u8();
  if (flag > 1) r.fail_at("bad has_minmax flag", at);
  s.has_minmax = flag == 1;
  if (s.has_minmax) {
    size_t min_at = r.position();
    s.min = read_scalar(r, type);
    s.max = read_scalar(r, type);
    if (compare_scalars(as_ref(s.min), as_ref(s.max)) > 0) r.fail_at("stats min > max", min_at);
  }
  s.null_count = r.u64();
  return s;
}

Bytes serialize_footer(const FileFooter& f) {
  ByteWriter w(256);
  w.u32(f.version);
  w.u64(f.num_rows);
  w.u32(static_cast<uint32_t>(f.columns.size()));
  for (const auto& c : f.columns) {
    if (c.name.size() > std::numeric_limits<uint16_t>::max()) throw SchemaError("column name too long");
    w.u8(static_cast<uint8_t>(c.type));
    w.u16(static_cast<uint16_t>(c.name.size()));
    w.str(c.name);
  }
  w.u32(static_cast<uint32_t>(f.stripes.size()));
  for (const auto& s : f.stripes) {
    w.u64(s.stripe_offset);
    w.u64(s.index_len);
    w.u64(s.data_len);
    w.u64(s.footer_len);
    w.u64(s.num_rows);
  }
  for (const auto& st : f.file_stats) write_stats(w, st);
  return std::move(w).take();
}

FileFooter parse_footer(ByteSpan bytes, CostCounters* counters) {
  if (counters) counters->add_deserialize();
  ByteReader r(bytes);
  FileFooter f;
  f.version = r.u32();
  if (f.version != kFormatVersion) r.fail_at("unknown footer version", 0);
  f.num_rows = r.u64();

  size_t ncols_at = r.position();
  uint32_t ncols = r.u32();
  if (ncols == 0) r.fail_at("footer has no columns", ncols_at);
  // Each column needs at least 3 bytes; reject absurd counts before reserving.
  if (ncols > r.remaining() / 3) throw ParseError("truncated input", bytes.size());
  f.columns.reserve(ncols);
  for (uint32_t i = 0; i < ncols; ++i) {
    size_t at = r.position();
    auto type = column_type_from_code(r.u8());
    if (!type) r.fail_at("unknown column type code", at);
    uint16_t name_len = r.u16();
    f.columns.push_back({r.str(name_len), *type});
  }

  size_t nstripes_at = r.position();
  uint32_t nstripes = r.u32();
  if (nstripes == 0) r.fail_at("footer has no stripes", nstripes_at);
  if (nstripes > r.remaining() / 40) throw ParseError("truncated input", bytes.size());
  f.stripes.reserve(nstripes);
  uint64_t total = 0;
  for (uint32_t i = 0; i < nstripes; ++i) {
    size_t at = r.position();
    StripeInfo s;
    s.stripe_offset = r.u64();
    s.index_len = r.u64();
    s.data_len = r.u64();
    s.footer_len = r.u64();
    s.num_rows = r.u64();
    if (s.num_rows == 0) r.fail_at("stripe with zero rows", at + 32);
    total += s.num_rows;
    f.stripes.push_back(s);
  }
  if (total != f.num_rows) r.fail_at("footer num_rows disagrees with stripe row counts", 4);

  f.file_stats.reserve(ncols);
  for (uint32_t i = 0; i < ncols; ++i) f.file_stats.push_back(read_stats(r, f.columns[i].type));
  r.expect_done("footer");
  return f;
}

Bytes serialize_stripe_footer(const StripeFooter& f) {
  ByteWriter w(4 + 17 * f.streams.size());
  w.u32(static_cast<uint32_t>(f.streams.size()));
  for (const auto& s : f.streams) {
    w.u64(s.chunk_offset);
    w.u64(s.chunk_len);
    w.u8(static_cast<uint8_t>(s.encoding));
  }
  return std::move(w).take();
}

StripeFooter parse_stripe_footer(ByteSpan bytes, CostCounters* counters) {
  if (counters) counters->add_deserialize();
  ByteReader r(bytes);
  StripeFooter f;
  uint32_t n = r.u32();
  if (n == 0) r.fail_at("stripe footer has no streams", 0);
  if (n > r.remaining() / 17) throw ParseError("truncated input", bytes.size());
  f.streams.reserve(n);
  uint64_t expected_offset = 0;
  for (uint32_t i = 0; i < n; ++i) {
    size_t at = r.position();
    StreamInfo s;
    s.chunk_offset = r.u64();
    s.chunk_len = r.u64();
    size_t enc_at = r.position();
    uint8_t enc = r.u8();
    if (enc != static_cast<uint8_t>(Encoding::kPlain)) r.fail_at("unknown stream encoding", enc_at);
    if (s.chunk_offset != expected_offset) r.fail_at("column chunks not contiguous", at);
    expected_offset += s.chunk_len;
    f.streams.push_back(s);
  }
  r.expect_done("stripe footer");
  return f;
}

Bytes serialize_stripe_index(const StripeIndex& idx) {
  ByteWriter w(64);
  w.u32(idx.num_row_groups);
  for (const auto& col : idx.columns) {
    write_stats(w, col.stripe_stats);
    for (const auto& rg : col.row_groups) {
      write_stats(w, rg.stats);
      w.u64(rg.byte_offset);
    }
  }
  return std::move(w).take();
}

StripeIndex parse_stripe_index(ByteSpan bytes, std::span<const ColumnType> types,
                               CostCounters* counters) {
  if (counters) counters->add_deserialize();
  ByteReader r(bytes);
  StripeIndex idx;
  idx.num_row_groups = r.u32();
  if (idx.num_row_groups == 0) r.fail_at("stripe index has no row groups", 0);
  // A row group entry is at least 17 bytes.
  if (idx.num_row_groups > r.remaining() / 17) throw ParseError("truncated input", bytes.size());
  idx.columns.reserve(types.size());
  for (ColumnType type : types) {
    ColumnIndex col;
    col.stripe_stats = read_stats(r, type);
    col.row_groups.reserve(idx.num_row_groups);
    for (uint32_t g = 0; g < idx.num_row_groups; ++g) {
      RowGroupEntry e;
      e.stats = read_stats(r, type);
      size_t at = r.position();
      e.byte_offset = r.u64();
      if (g > 0 && e.byte_offset <= col.row_groups.back().byte_offset) {
        r.fail_at("row group offsets not increasing", at);
      }
      col.row_groups.push_back(std::move(e));
    }
    idx.columns.push_back(std::move(col));
  }
  r.expect_done("stripe index");
  return idx;
}

}  // namespace colcache::colfile
