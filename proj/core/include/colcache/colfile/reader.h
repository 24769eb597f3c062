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
#include <memory>
#include <span>
#include <string_view>

#include "colcache/colfile/types.h"
#include "colcache/common/bytes.h"
#include "colcache/common/cost_counters.h"

namespace colcache::colfile {

/// Positional reads over an immutable byte source. Implementations are safe
/// for concurrent use.
class RandomAccessSource {
 public:
  virtual ~RandomAccessSource() = default;
  virtual uint64_t size() const = 0;
  /// Fills `out` from `offset`; throws IoError on short reads.
  virtual void read_at(uint64_t offset, std::span<uint8_t> out) const = 0;
};

std::shared_ptr<RandomAccessSource> open_posix_source(const std::filesystem::path& path);
std::shared_ptr<RandomAccessSource> make_memory_source(std::shared_ptr<const Bytes> bytes);

struct FooterLocation {
  uint64_t offset = 0;
  uint64_t compressed_len = 0;

  friend bool operator==(const FooterLocation&, const FooterLocation&) = default;
};

/// Decodes the 8-byte tail (u32 footer length + magic). Throws
/// CorruptFileError for bad magic or a length that cannot fit in the file.
FooterLocation locate_footer(std::span<const uint8_t> tail, uint64_t file_length);

/// Decompressed column chunk: null bitmap followed by one slot per row.
class ColumnChunk {
 public:
  /// Validates the layout; throws CorruptFileError on a mismatch.
  ColumnChunk(ColumnType type, uint64_t num_rows, Bytes data);

  ColumnType type() const noexcept { return type_; }
  uint64_t num_rows() const noexcept { return num_rows_; }
  bool is_null(uint64_t row) const noexcept {
    return ((data_[row >> 3] >> (row & 7)) & 1) == 0;
  }
  std::span<const uint8_t> null_bitmap() const noexcept { return {data_.data(), bitmap_len()}; }
  std::span<const uint8_t> values() const noexcept {
    return std::span<const uint8_t>(data_).subspan(bitmap_len());
  }

  /// Fixed-width accessors by row number.
  int64_t int64_at(uint64_t row) const noexcept {
    return static_cast<int64_t>(load_le<uint64_t>(values().data() + row * 8));
  }
  double float64_at(uint64_t row) const noexcept {
    return bits_double(load_le<uint64_t>(values().data() + row * 8));
  }
  /// Utf8 slot starting at `value_offset` within values(); returns the
  /// string and advances `value_offset` past the slot.
  std::string_view utf8_at(uint64_t& value_offset) const noexcept {
    const uint8_t* p = values().data() + value_offset;
    uint32_t len = load_le<uint32_t>(p);
    value_offset += 4 + len;
    return {reinterpret_cast<const char*>(p + 4), len};
  }

  /// Row `row` as a Scalar (monostate when null). Linear for Utf8.
  Scalar cell(uint64_t row) const;

  const Bytes& bytes() const noexcept { return data_; }

 private:
  uint64_t bitmap_len() const noexcept { return (num_rows_ + 7) / 8; }

  ColumnType type_;
  uint64_t num_rows_;
  Bytes data_;
};

/// Low-level reader: raw section reads plus column chunk decoding. Metadata
/// parsing and caching live above this layer.
class FileReader {
 public:
  /// Reads the tail and checks both magics.
  explicit FileReader(std::shared_ptr<RandomAccessSource> source);

  static std::shared_ptr<const FileReader> open(const std::filesystem::path& path);
  static std::shared_ptr<const FileReader> from_bytes(Bytes bytes);

  uint64_t size() const noexcept { return size_; }
  const FooterLocation& footer_location() const noexcept { return footer_loc_; }

  Bytes read_range(uint64_t offset, uint64_t len) const;
  Bytes read_footer_compressed() const;
  /// Bounds-checks `info` against the file before reading.
  Bytes read_stripe_index_compressed(const StripeInfo& info) const;
  Bytes read_stripe_footer_compressed(const StripeInfo& info) const;

  /// Reads and inflates one column chunk. Throws PreconditionError for
  /// out-of-range indices and CorruptFileError when the stripe footer points
  /// outside the stripe's data region.
  ColumnChunk read_column_chunk(uint32_t stripe, uint32_t column, const FileFooter& footer,
                                const StripeFooter& stripe_footer,
                                CostCounters* counters = nullptr) const;
  /// Same, from already-resolved coordinates.
  ColumnChunk read_column_chunk(const StripeInfo& info, ColumnType type, const StreamInfo& stream,
                                CostCounters* counters = nullptr) const;

 private:
  void check_stripe_bounds(const StripeInfo& info) const;

  std::shared_ptr<RandomAccessSource> source_;
  uint64_t size_ = 0;
  FooterLocation footer_loc_;
};

/// Reads, inflates and parses every metadata section straight from storage.
/// This is the uncached path and the reference the cache paths are checked
/// against.
FileFooter read_footer(const FileReader& reader, CostCounters* counters = nullptr);
StripeFooter read_stripe_footer(const FileReader& reader, const StripeInfo& info,
                                CostCounters* counters = nullptr);
StripeIndex read_stripe_index(const FileReader& reader, const StripeInfo& info,
                              std::span<const ColumnType> types, CostCounters* counters = nullptr);

}  // namespace colcache::colfile
