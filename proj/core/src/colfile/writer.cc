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

#include "colcache/colfile/writer.h"

#include <limits>

#include "colcache/colfile/metadata_codec.h"
#include "colcache/common/error.h"

namespace colcache::colfile {

namespace {

struct ColumnBuffer {
  explicit ColumnBuffer(ColumnType t) : type(t), group_stats(t) {}

  ColumnType type;
  Bytes bitmap;
  Bytes values;
  uint64_t rows = 0;
  std::vector<RowGroupEntry> groups;
  StatsBuilder group_stats;

  void append(const Cell& cell) {
    if (rows % kRowGroupRows == 0) {
      close_group();
      groups.push_back({ColumnStats{}, values.size()});
    }
    if (rows % 8 == 0) bitmap.push_back(0);
    bool is_null = std::holds_alternative<std::monostate>(cell);
    if (!is_null) bitmap.back() |= static_cast<uint8_t>(1u << (rows % 8));
    group_stats.add(cell);

    size_t at = values.size();
    switch (type) {
      case ColumnType::kInt64:
        values.resize(at + 8);
        store_le(values.data() + at, is_null ? uint64_t{0} : static_cast<uint64_t>(std::get<int64_t>(cell)));
        break;
      case ColumnType::kFloat64:
        values.resize(at + 8);
        store_le(values.data() + at, is_null ? uint64_t{0} : double_bits(std::get<double>(cell)));
        break;
      case ColumnType::kUtf8: {
        std::string_view s = is_null ? std::string_view{} : std::string_view(std::get<std::string>(cell));
        values.resize(at + 4 + s.size());
        store_le(values.data() + at, static_cast<uint32_t>(s.size()));
        std::copy(s.begin(), s.end(), values.begin() + static_cast<std::ptrdiff_t>(at + 4));
        break;
      }
    }
    ++rows;
  }

  void close_group() {
    if (!groups.empty()) {
      groups.back().stats = group_stats.finish();
      group_stats = StatsBuilder(type);
    }
  }

  void reset() {
    bitmap.clear();
    values.clear();
    rows = 0;
    groups.clear();
    group_stats = StatsBuilder(type);
  }
};

void check_cell(const Cell& cell, const ColumnSpec& col, size_t index) {
  if (std::holds_alternative<std::monostate>(cell)) return;
  if (!scalar_matches_type(cell, col.type)) {
    throw SchemaError("column " + std::to_string(index) + " ('" + col.name + "') expects " +
                      std::string(column_type_name(col.type)));
  }
  if (auto* s = std::get_if<std::string>(&cell); s && s->size() > std::numeric_limits<uint32_t>::max()) {
    throw SchemaError("string value too long");
  }
}

}  // namespace

struct FileWriter::Impl {
  Impl(Schema s, WriterOptions o) : schema(std::move(s)), options(o) {
    if (schema.empty()) throw SchemaError("schema has no columns");
    if (options.stripe_rows == 0) throw PreconditionError("stripe_rows must be >= 1");
    for (const auto& c : schema) {
      if (c.name.size() > std::numeric_limits<uint16_t>::max()) throw SchemaError("column name too long");
      columns.emplace_back(c.type);
    }
    out.str(std::string_view(kMagic, kMagicLen));
  }

  Schema schema;
  WriterOptions options;
  std::vector<ColumnBuffer> columns;
  ByteWriter out;
  std::vector<StripeInfo> stripes;
  std::vector<StatsBuilder> file_stats_builders;
  uint64_t total_rows = 0;

  void append(const Row& row) {
    if (row.size() != schema.size()) {
      throw SchemaError("row has " + std::to_string(row.size()) + " cells, schema has " +
                        std::to_string(schema.size()));
    }
    for (size_t i = 0; i < row.size(); ++i) check_cell(row[i], schema[i], i);
    for (size_t i = 0; i < row.size(); ++i) columns[i].append(row[i]);
    ++total_rows;
    if (columns[0].rows == options.stripe_rows) flush_stripe();
  }

  void flush_stripe() {
    const uint64_t rows = columns[0].rows;
    if (rows == 0) return;

    StripeIndex index;
    index.num_row_groups = static_cast<uint32_t>(row_groups_for(rows));
    StripeFooter sfooter;
    Bytes data;
    for (auto& col : columns) {
      col.close_group();
      StatsBuilder stripe_stats(col.type);
      for (const auto& g : col.groups) stripe_stats.merge(g.stats.ref());
      index.columns.push_back({stripe_stats.finish(), std::move(col.groups)});

      Bytes chunk;
      chunk.reserve(col.bitmap.size() + col.values.size());
      chunk.insert(chunk.end(), col.bitmap.begin(), col.bitmap.end());
      chunk.insert(chunk.end(), col.values.begin(), col.values.end());
      Bytes compressed = deflate_section(chunk, options.compression_level);
      sfooter.streams.push_back({data.size(), compressed.size(), Encoding::kPlain});
      data.insert(data.end(), compressed.begin(), compressed.end());
      col.reset();
    }

    Bytes index_c = deflate_section(serialize_stripe_index(index), options.compression_level);
    Bytes footer_c = deflate_section(serialize_stripe_footer(sfooter), options.compression_level);

    StripeInfo info;
    info.stripe_offset = out.size();
    info.index_len = index_c.size();
    info.data_len = data.size();
    info.footer_len = footer_c.size();
    info.num_rows = rows;
    out.bytes(index_c);
    out.bytes(data);
    out.bytes(footer_c);
    stripes.push_back(info);

    if (file_stats_builders.empty()) {
      for (const auto& c : schema) file_stats_builders.emplace_back(c.type);
    }
    for (size_t i = 0; i < index.columns.size(); ++i) {
      file_stats_builders[i].merge(index.columns[i].stripe_stats.ref());
    }
  }

  WrittenFile finish() {
    if (total_rows == 0) throw EmptyInputError("no rows to write");
    flush_stripe();

    FileFooter footer;
    footer.version = kFormatVersion;
    footer.num_rows = total_rows;
    footer.columns = schema;
    footer.stripes = stripes;
    for (const auto& b : file_stats_builders) footer.file_stats.push_back(b.finish());

    Bytes footer_c = deflate_section(serialize_footer(footer), options.compression_level);
    if (footer_c.size() > std::numeric_limits<uint32_t>::max()) throw Error("footer too large");
    out.bytes(footer_c);
    out.u32(static_cast<uint32_t>(footer_c.size()));
    out.str(std::string_view(kMagic, kMagicLen));
    return {std::move(out).take(), std::move(footer)};
  }
};

FileWriter::FileWriter(Schema schema, WriterOptions options)
    : impl_(std::make_unique<Impl>(std::move(schema), options)) {}
FileWriter::~FileWriter() = default;
FileWriter::FileWriter(FileWriter&&) noexcept = default;
FileWriter& FileWriter::operator=(FileWriter&&) noexcept = default;

void FileWriter::append(const Row& row) { impl_->append(row); }

void FileWriter::append(std::span<const Row> rows) {
  for (const auto& r : rows) impl_->append(r);
}

uint64_t FileWriter::rows_written() const noexcept { return impl_->total_rows; }

WrittenFile FileWriter::finish() && { return impl_->finish(); }

WrittenFile write_file(const Schema& schema, std::span<const Row> rows, const WriterOptions& options) {
  FileWriter w(schema, options);
  w.append(rows);
  return std::move(w).finish();
}

}  // namespace colcache::colfile
