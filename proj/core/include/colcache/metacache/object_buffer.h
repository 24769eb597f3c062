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

#include <memory>
#include <span>
#include <string_view>

#include "colcache/colfile/types.h"
#include "colcache/common/bytes.h"
#include "colcache/common/cost_counters.h"
#include "colcache/metacache/cache_key.h"

// Object buffers are flat little-endian encodings of the metadata sections.
// Every table has a fixed record stride and starts 8-byte aligned, strings
// live in a trailing heap, and all pad bytes are zero. Decoding validates
// the header and table bounds only, then reads fields in place.
//
// FooterBuf header (56 bytes):
//   [0] "OBF1"  [4] u8 kind=0  [8] u32 version  [12] u32 num_columns
//   [16] u64 num_rows  [24] u32 num_stripes  [32] u32 col_table_off
//   [36] u32 stripe_table_off  [40] u32 stats_table_off  [44] u32 heap_off
//   [48] u32 heap_len
// StripeFooterBuf header (16 bytes):
//   [0] "OBF1"  [4] u8 kind=1  [8] u32 num_columns; stream table at 16.
// StripeIndexBuf header (32 bytes):
//   [0] "OBF1"  [4] u8 kind=2  [8] u32 num_columns  [12] u32 num_row_groups
//   [16] u32 region_off  [20] u32 heap_off  [24] u32 heap_len
//   then one region per column, stride 32 + 40 * num_row_groups.
//
// Stats record (32 bytes): u8 flags, pad7, u64 min_bits, u64 max_bits,
// u64 null_count. flags bit 0 is has_minmax, bits 1-2 hold the column type
// code. Utf8 min/max bits pack (heap offset | length << 32).

namespace colcache::metacache {

inline constexpr char kObjectBufferMagic[4] = {'O', 'B', 'F', '1'};

namespace layout {
inline constexpr size_t kFooterHeader = 56;
inline constexpr size_t kStripeFooterHeader = 16;
inline constexpr size_t kStripeIndexHeader = 32;
inline constexpr size_t kColumnRecord = 16;
inline constexpr size_t kStripeRecord = 40;
inline constexpr size_t kStatsRecord = 32;
inline constexpr size_t kStreamRecord = 24;
inline constexpr size_t kRowGroupRecord = kStatsRecord + 8;
}  // namespace layout

Bytes encode_footer_buf(const colfile::FileFooter& footer, CostCounters* counters = nullptr);
Bytes encode_stripe_footer_buf(const colfile::StripeFooter& footer, CostCounters* counters = nullptr);
Bytes encode_stripe_index_buf(const colfile::StripeIndex& index, std::span<const colfile::ColumnType> types,
                              CostCounters* counters = nullptr);

/// Header and bounds validation for `kind`. Throws ValidationError.
void validate_object_buffer(ByteSpan buf, SectionKind kind);
/// Non-throwing form of validate_object_buffer.
bool is_valid_object_buffer(ByteSpan buf, SectionKind kind) noexcept;

struct ColumnRef {
  colfile::ColumnType type;
  std::string_view name;
};

/// Read-only accessor over a FooterBuf. Holds a span; `anchor` (optional)
/// keeps the backing storage alive.
class FooterView {
 public:
  FooterView() = default;

  uint32_t version() const noexcept;
  uint64_t num_rows() const noexcept;
  uint32_t num_columns() const noexcept;
  uint32_t num_stripes() const noexcept;
  ColumnRef column(uint32_t i) const;
  colfile::ColumnType column_type(uint32_t i) const;
  colfile::StripeInfo stripe(uint32_t i) const;
  colfile::StatsRef stats(uint32_t i) const;

  colfile::FileFooter materialize() const;
  ByteSpan bytes() const noexcept { return buf_; }

 private:
  friend FooterView decode_footer_view(ByteSpan, CostCounters*, std::shared_ptr<const void>);
  ByteSpan buf_;
  std::shared_ptr<const void> anchor_;
};

class StripeFooterView {
 public:
  StripeFooterView() = default;

  uint32_t num_columns() const noexcept;
  colfile::StreamInfo stream(uint32_t column) const;

  colfile::StripeFooter materialize() const;
  ByteSpan bytes() const noexcept { return buf_; }

 private:
  friend StripeFooterView decode_stripe_footer_view(ByteSpan, CostCounters*, std::shared_ptr<const void>);
  ByteSpan buf_;
  std::shared_ptr<const void> anchor_;
};

class StripeIndexView {
 public:
  StripeIndexView() = default;

  uint32_t num_columns() const noexcept;
  uint32_t num_row_groups() const noexcept;
  colfile::StatsRef stripe_stats(uint32_t column) const;
  colfile::StatsRef row_group_stats(uint32_t column, uint32_t group) const;
  uint64_t row_group_offset(uint32_t column, uint32_t group) const;

  colfile::StripeIndex materialize() const;
  ByteSpan bytes() const noexcept { return buf_; }

 private:
  friend StripeIndexView decode_stripe_index_view(ByteSpan, CostCounters*, std::shared_ptr<const void>);
  const uint8_t* region(uint32_t column) const;
  colfile::StatsRef read_stats(const uint8_t* rec) const;

  ByteSpan buf_;
  std::shared_ptr<const void> anchor_;
};

/// O(1) validation, then a view over `buf`. Bumps decode_count once.
FooterView decode_footer_view(ByteSpan buf, CostCounters* counters = nullptr,
                              std::shared_ptr<const void> anchor = nullptr);
StripeFooterView decode_stripe_footer_view(ByteSpan buf, CostCounters* counters = nullptr,
                                           std::shared_ptr<const void> anchor = nullptr);
StripeIndexView decode_stripe_index_view(ByteSpan buf, CostCounters* counters = nullptr,
                                         std::shared_ptr<const void> anchor = nullptr);

}  // namespace colcache::metacache
