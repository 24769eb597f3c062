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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace colcache::colfile {

inline constexpr uint32_t kFormatVersion = 1;
inline constexpr uint64_t kRowGroupRows = 1024;
inline constexpr char kMagic[4] = {'O', 'C', 'F', '1'};
inline constexpr uint64_t kMagicLen = 4;
/// u32 footer length followed by the trailing magic.
inline constexpr uint64_t kTailLen = 8;

enum class ColumnType : uint8_t { kInt64 = 0, kFloat64 = 1, kUtf8 = 2 };

std::optional<ColumnType> column_type_from_code(uint8_t code) noexcept;
std::string_view column_type_name(ColumnType t) noexcept;

enum class Encoding : uint8_t { kPlain = 0 };

/// Owning typed value. monostate is SQL NULL.
using Scalar = std::variant<std::monostate, int64_t, double, std::string>;
/// Non-owning counterpart of Scalar used by zero-copy readers.
using ScalarRef = std::variant<std::monostate, int64_t, double, std::string_view>;

ScalarRef as_ref(const Scalar& s) noexcept;
Scalar to_owned(const ScalarRef& s);
bool scalar_matches_type(const Scalar& s, ColumnType t) noexcept;

/// One input cell. Same representation as Scalar.
using Cell = Scalar;
using Row = std::vector<Cell>;

struct ColumnSpec {
  std::string name;
  ColumnType type = ColumnType::kInt64;

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

using Schema = std::vector<ColumnSpec>;

/// Non-owning stats, produced by both the struct and object-buffer paths.
struct StatsRef {
  bool has_minmax = false;
  ScalarRef min;
  ScalarRef max;
  uint64_t null_count = 0;
};

struct ColumnStats {
  bool has_minmax = false;
  Scalar min;
  Scalar max;
  uint64_t null_count = 0;

  StatsRef ref() const noexcept { return {has_minmax, as_ref(min), as_ref(max), null_count}; }
  friend bool operator==(const ColumnStats&, const ColumnStats&) = default;
};

struct StripeInfo {
  uint64_t stripe_offset = 0;
  uint64_t index_len = 0;
  uint64_t data_len = 0;
  uint64_t footer_len = 0;
  uint64_t num_rows = 0;

  uint64_t data_offset() const noexcept { return stripe_offset + index_len; }
  uint64_t footer_offset() const noexcept { return stripe_offset + index_len + data_len; }
  uint64_t end_offset() const noexcept { return footer_offset() + footer_len; }

  friend bool operator==(const StripeInfo&, const StripeInfo&) = default;
};

struct FileFooter {
  uint32_t version = kFormatVersion;
  uint64_t num_rows = 0;
  Schema columns;
  std::vector<StripeInfo> stripes;
  std::vector<ColumnStats> file_stats;

  std::vector<ColumnType> column_types() const;
  friend bool operator==(const FileFooter&, const FileFooter&) = default;
};

struct StreamInfo {
  uint64_t chunk_offset = 0;
  uint64_t chunk_len = 0;
  Encoding encoding = Encoding::kPlain;

  friend bool operator==(const StreamInfo&, const StreamInfo&) = default;
};

struct StripeFooter {
  std::vector<StreamInfo> streams;

  friend bool operator==(const StripeFooter&, const StripeFooter&) = default;
};

struct RowGroupEntry {
  ColumnStats stats;
  /// Offset of the group's first slot inside the chunk's values region.
  uint64_t byte_offset = 0;

  friend bool operator==(const RowGroupEntry&, const RowGroupEntry&) = default;
};

struct ColumnIndex {
  ColumnStats stripe_stats;
  std::vector<RowGroupEntry> row_groups;

  friend bool operator==(const ColumnIndex&, const ColumnIndex&) = default;
};

struct StripeIndex {
  uint32_t num_row_groups = 0;
  std::vector<ColumnIndex> columns;

  friend bool operator==(const StripeIndex&, const StripeIndex&) = default;
};

inline uint64_t row_groups_for(uint64_t rows) noexcept {
  return (rows + kRowGroupRows - 1) / kRowGroupRows;
}

}  // namespace colcache::colfile
