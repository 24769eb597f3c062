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

#include "colcache/common/bytes.h"
#include "colcache/common/cost_counters.h"

namespace colcache::colfile {

inline constexpr int kDefaultCompressionLevel = 6;

/// Raw DEFLATE (RFC 1951, no zlib/gzip wrapper).
Bytes deflate_section(ByteSpan raw, int level = kDefaultCompressionLevel);

/// Inverse of deflate_section. Throws DecompressError on a malformed,
/// truncated, or over-long stream. `size_hint` only presizes the output.
Bytes inflate_section(ByteSpan compressed, CostCounters* counters = nullptr,
                      size_t size_hint = 0);

}  // namespace colcache::colfile
