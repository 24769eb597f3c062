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
#include <string>
#include <string_view>
#include <vector>

#include "colcache/colfile/types.h"
#include "colcache/common/bytes.h"

namespace colcache::bench {

struct GenSpec {
  uint64_t seed = 0;
  uint32_t files = 1;
  uint32_t stripes = 1;
  uint64_t rows = 1024;  // per stripe
  std::vector<colfile::ColumnType> columns{colfile::ColumnType::kInt64};
  std::filesystem::path out;
};

/// Parses "int64x2,float64,utf8" into a column list. Throws UsageError.
std::vector<colfile::ColumnType> parse_column_spec(std::string_view spec);
std::string format_column_spec(const std::vector<colfile::ColumnType>& columns);

/// Columns are named c0, c1, ...
colfile::Schema schema_for(const std::vector<colfile::ColumnType>& columns);

/// Row-major value draws from splitmix64 seeded with seed ^ file_index:
/// int64 = next() mod 10^6, float64 = next() / 2^64, utf8 = 8..16 chars of
/// [a-z] (length 8 + next() mod 9, then one draw per char).
std::vector<colfile::Row> generate_rows(const GenSpec& spec, uint32_t file_index);

/// One file's bytes; each stripe holds spec.rows rows.
Bytes generate_file(const GenSpec& spec, uint32_t file_index);

std::string data_file_name(uint32_t file_index);

struct ManifestEntry {
  std::string path;  // relative to the dataset directory
  uint64_t size = 0;
  uint64_t checksum = 0;  // FNV-1a 64 of the file bytes

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct Manifest {
  GenSpec spec;  // `out` is not stored
  std::vector<ManifestEntry> entries;
};

inline constexpr std::string_view kManifestName = "manifest.json";

/// Writes the dataset and manifest into spec.out, which must be empty or
/// absent (PreconditionError otherwise).
Manifest generate_dataset(const GenSpec& spec);

/// Throws StaleDatasetError if the manifest is missing or malformed.
Manifest load_manifest(const std::filesystem::path& dir);

/// Checks every file against the manifest and returns their paths in
/// manifest order. Throws StaleDatasetError on any mismatch.
std::vector<std::filesystem::path> verify_dataset(const std::filesystem::path& dir);

}  // namespace colcache::bench
