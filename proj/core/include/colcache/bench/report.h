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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colcache/bench/runner.h"

namespace colcache::bench {

struct ModeSummary {
  double cold_cpu_ms = 0;  // median
  double warm_cpu_ms = 0;  // median
  /// Medians of warm-pass counter deltas.
  double warm_inflate = 0;
  double warm_deserialize = 0;
  double warm_encode = 0;
  double warm_decode = 0;
};

struct ScenarioSummary {
  std::string scenario;
  std::map<scan::CacheMode, ModeSummary> modes;
  /// (mode - none) / none of cold medians, percent. Empty when none is 0.
  std::optional<double> cold_overhead_bytes;
  std::optional<double> cold_overhead_objects;
  /// (none - mode) / none of warm medians, percent.
  std::optional<double> warm_reduction_bytes;
  std::optional<double> warm_reduction_objects;
  bool cold_order_holds = false;  // none < bytes < objects
  bool warm_order_holds = false;  // objects < bytes < none
};

struct Report {
  std::vector<ScenarioSummary> scenarios;
  bool all_orderings_hold() const noexcept;
};

double median(std::vector<double> values);

/// Throws ReportError on unreadable or malformed input.
std::vector<BenchRow> read_csv(const std::filesystem::path& path);

/// Throws ReportError naming every scenario/mode/phase gap.
Report build_report(std::span<const BenchRow> rows);

std::string format_report_text(const Report& report);
std::string format_report_csv(const Report& report);

}  // namespace colcache::bench
