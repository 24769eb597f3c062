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

#include <optional>
#include <span>
#include <string_view>

#include "colcache/scan/engine.h"
#include "colcache/scan/predicate.h"

namespace colcache::bench {

/// Built-in scans over the first numeric column c:
///   W1: count(*) where c < 100000
///   W2: sum(c) where c >= 250000 and c < 750000
///   W3: sum(c), no filter
/// Float64 columns use the same cut points scaled by 10^-6.
enum class WorkloadId : uint8_t { kW1, kW2, kW3 };

std::string_view workload_name(WorkloadId w) noexcept;
std::optional<WorkloadId> parse_workload(std::string_view s) noexcept;

struct Workload {
  scan::Predicate predicate;
  scan::Aggregate aggregate;
};

/// Throws UsageError when the schema has no numeric column.
Workload make_workload(WorkloadId id, std::span<const colfile::ColumnType> types);

}  // namespace colcache::bench
