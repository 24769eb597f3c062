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

#include <span>

#include "colcache/colfile/types.h"
#include "colcache/common/bytes.h"
#include "colcache/common/cost_counters.h"

namespace colcache::colfile {

// Canonical (uncompressed) serialization of the three metadata sections.
// Each parse is strict: serialize(parse(b)) == b for every accepted b, and
// every rejected input raises ParseError carrying the offending offset.
// Parses bump `deserialize_count` when counters are supplied.

Bytes serialize_footer(const FileFooter& footer);
FileFooter parse_footer(ByteSpan bytes, CostCounters* counters = nullptr);

Bytes serialize_stripe_footer(const StripeFooter& footer);
StripeFooter parse_stripe_footer(ByteSpan bytes, CostCounters* counters = nullptr);

/// The index does not record column types; the footer supplies them.
Bytes serialize_stripe_index(const StripeIndex& index);
StripeIndex parse_stripe_index(ByteSpan bytes, std::span<const ColumnType> types,
                               CostCounters* counters = nullptr);

void write_stats(ByteWriter& w, const ColumnStats& s);
ColumnStats read_stats(ByteReader& r, ColumnType type);

}  // namespace colcache::colfile
