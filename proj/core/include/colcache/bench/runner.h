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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "colcache/bench/workload.h"
#include "colcache/metacache/cache.h"
#include "colcache/scan/engine.h"

namespace colcache::bench {

/// One CSV row: one pass of a workload.
struct BenchRow {
  std::string scenario;
  scan::CacheMode mode = scan::CacheMode::kNone;
  std::string phase;  // "cold" or "warm"
  uint32_t run = 0;
  double cpu_ms = 0;
  double wall_ms = 0;
  metacache::CacheStats stats;  // delta over the pass
  uint64_t rows_scanned = 0;
  uint64_t stripes_skipped = 0;
  colfile::Scalar value;  // query result; not written to CSV
};

std::string_view csv_header();
std::string to_csv(const BenchRow& row);
/// Throws ReportError on a malformed line.
BenchRow parse_csv_row(std::string_view line);

/// Appends rows, writing the header first when the file is new or empty.
void append_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows);

/// BENCH_WORKERS if set to a positive integer, else `fallback`.
unsigned workers_from_env(unsigned fallback = 4);

struct RunConfig {
  std::filesystem::path data;
  WorkloadId workload = WorkloadId::kW1;
  scan::CacheMode mode = scan::CacheMode::kNone;
  uint64_t capacity_bytes = 64ull << 20;
  metacache::EvictionPolicy policy = metacache::EvictionPolicy::kLru;
  uint32_t reps = 5;
  unsigned workers = 4;
  /// Empty: memory backend. Otherwise a directory backend rooted here.
  std::filesystem::path cache_dir;
};

/// One cold pass on a fresh cache, then `reps` warm passes. Verifies the
/// dataset against its manifest first.
std::vector<BenchRow> run_benchmark(const RunConfig& config);

struct StressConfig {
  std::filesystem::path data;
  uint64_t capacity_bytes = 0;
  WorkloadId workload = WorkloadId::kW3;
  scan::CacheMode mode = scan::CacheMode::kObjects;
  metacache::EvictionPolicy policy = metacache::EvictionPolicy::kLru;
  uint32_t reps = 5;
  unsigned workers = 4;
  bool record_trace = false;
};

struct StressOutcome {
  uint64_t working_set_bytes = 0;  // bytes cached after an unbounded dry pass
  std::vector<BenchRow> rows;      // cold pass, then warm passes
  std::vector<double> hit_rates;   // per row
  std::vector<metacache::TraceEvent> trace;  // from the fresh cache on
};

StressOutcome run_stress(const StressConfig& config);

}  // namespace colcache::bench
