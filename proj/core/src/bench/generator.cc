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

#include "colcache/bench/generator.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "colcache/bench/splitmix64.h"
#include "colcache/colfile/writer.h"
#include "colcache/common/error.h"
#include "colcache/common/hash.h"

namespace colcache::bench {

namespace fs = std::filesystem;
using colfile::ColumnType;
using colfile::Row;
using nlohmann::json;

std::vector<ColumnType> parse_column_spec(std::string_view spec) {
  std::vector<ColumnType> out;
  if (spec.empty()) throw UsageError("empty column spec");
  size_t pos = 0;
  while (pos <= spec.size()) {
    size_t comma = spec.find(',', pos);
    std::string_view item = spec.substr(pos, comma == std::string_view::npos ? spec.npos : comma - pos);
    uint32_t repeat = 1;
    if (size_t x = item.find('x'); x != std::string_view::npos) {
      std::string_view count = item.substr(x + 1);
      auto [p, ec] = std::from_chars(count.data(), count.data() + count.size(), repeat);
      if (ec != std::errc() || p != count.data() + count.size() || repeat == 0) {
        throw UsageError("bad repeat count in column spec item '" + std::string(item) + "'");
      }
      item = item.substr(0, x);
    }
    ColumnType type;
    if (item == "int64") {
      type = ColumnType::kInt64;
    } else if (item == "float64") {
      type = ColumnType::kFloat64;
    } else if (item == "utf8") {
      type = ColumnType::kUtf8;
    } else {
      throw UsageError("unknown column type '" + std::string(item) + "' (int64, float64, utf8)");
    }
    out.insert(out.end(), repeat, type);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string format_column_spec(const std::vector<ColumnType>& columns) {
  std::string out;
  for (size_t i = 0; i < columns.size();) {
    size_t j = i;
    while (j < columns.size() && columns[j] == columns[i]) ++j;
    if (!out.empty()) out += ',';
    out += colfile::column_type_name(columns[i]);
    if (j - i > 1) out += 'x' + std::to_string(j - i);
    i = j;
  }
  return out;
}

colfile::Schema schema_for(const std::vector<ColumnType>& columns) {
  colfile::Schema schema;
  for (size_t i = 0; i < columns.size(); ++i) schema.push_back({"c" + std::to_string(i), columns[i]});
  return schema;
}

namespace {

void check_spec(const GenSpec& spec) {
  if (spec.files == 0 || spec.stripes == 0 || spec.rows == 0 || spec.columns.empty()) {
    throw PreconditionError("files, stripes, rows and columns must all be >= 1");
  }
}

Row draw_row(SplitMix64& rng, const std::vector<ColumnType>& columns) {
  Row row;
  row.reserve(columns.size());
  for (ColumnType t : columns) {
    switch (t) {
      case ColumnType::kInt64: row.emplace_back(static_cast<int64_t>(rng.next() % 1'000'000)); break;
      case ColumnType::kFloat64: row.emplace_back(static_cast<double>(rng.next()) * 0x1p-64); break;
      case ColumnType::kUtf8: {
        std::string s(8 + rng.next() % 9, 'a');
        for (char& c : s) c = static_cast<char>('a' + rng.next() % 26);
        row.emplace_back(std::move(s));
        break;
      }
    }
  }
  return row;
}

uint64_t total_rows(const GenSpec& spec) { return uint64_t{spec.stripes} * spec.rows; }

}  // namespace

std::vector<Row> generate_rows(const GenSpec& spec, uint32_t file_index) {
  check_spec(spec);
  SplitMix64 rng(spec.seed ^ file_index);
  std::vector<Row> rows;
  rows.reserve(total_rows(spec));
  for (uint64_t i = 0; i < total_rows(spec); ++i) rows.push_back(draw_row(rng, spec.columns));
  return rows;
}

Bytes generate_file(const GenSpec& spec, uint32_t file_index) {
  check_spec(spec);
  SplitMix64 rng(spec.seed ^ file_index);
  colfile::FileWriter writer(schema_for(spec.columns), {.stripe_rows = spec.rows});
  for (uint64_t i = 0; i < total_rows(spec); ++i) writer.append(draw_row(rng, spec.columns));
  return std::move(writer).finish().bytes;
}

std::string data_file_name(uint32_t file_index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "part-%05u.ocf", file_index);
  return buf;
}

namespace {

void write_whole(const fs::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

Bytes read_whole(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StaleDatasetError("missing dataset file " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

json manifest_json(const Manifest& m) {
  json entries = json::array();
  for (const auto& e : m.entries) {
    entries.push_back({{"path", e.path}, {"size", e.size}, {"checksum", hex64(e.checksum)}});
  }
  return {{"version", 1},
          {"seed", m.spec.seed},
          {"files", m.spec.files},
          {"stripes", m.spec.stripes},
          {"rows", m.spec.rows},
          {"cols", format_column_spec(m.spec.columns)},
          {"entries", std::move(entries)}};
}

}  // namespace

Manifest generate_dataset(const GenSpec& spec) {
  check_spec(spec);
  if (spec.out.empty()) throw PreconditionError("no output directory");
  std::error_code ec;
  if (fs::exists(spec.out, ec)) {
    if (!fs::is_directory(spec.out, ec) || !fs::is_empty(spec.out, ec)) {
      throw PreconditionError("output directory " + spec.out.string() + " is not empty");
    }
  } else if (!fs::create_directories(spec.out, ec) && ec) {
    throw IoError("cannot create " + spec.out.string() + ": " + ec.message());
  }

  Manifest m;
  m.spec = spec;
  m.spec.out.clear();
  for (uint32_t i = 0; i < spec.files; ++i) {
    Bytes bytes = generate_file(spec, i);
    ManifestEntry e{data_file_name(i), bytes.size(), fnv1a64(bytes)};
    write_whole(spec.out / e.path, as_string_view(bytes));
    m.entries.push_back(std::move(e));
  }
  write_whole(spec.out / kManifestName, manifest_json(m).dump(2) + "\n");
  return m;
}

Manifest load_manifest(const fs::path& dir) {
  std::ifstream in(dir / kManifestName);
  if (!in) throw StaleDatasetError("no " + std::string(kManifestName) + " in " + dir.string());
  try {
    json j = json::parse(in);
    Manifest m;
    m.spec.seed = j.at("seed").get<uint64_t>();
    m.spec.files = j.at("files").get<uint32_t>();
    m.spec.stripes = j.at("stripes").get<uint32_t>();
    m.spec.rows = j.at("rows").get<uint64_t>();
    m.spec.columns = parse_column_spec(j.at("cols").get<std::string>());
    for (const auto& e : j.at("entries")) {
      const std::string sum = e.at("checksum").get<std::string>();
      uint64_t checksum = 0;
      auto [p, err] = std::from_chars(sum.data(), sum.data() + sum.size(), checksum, 16);
      if (err != std::errc() || p != sum.data() + sum.size()) throw StaleDatasetError("bad checksum field");
      std::string path = e.at("path").get<std::string>();
      if (path.empty() || path.find('/') != std::string::npos) throw StaleDatasetError("bad path field");
      m.entries.push_back({std::move(path), e.at("size").get<uint64_t>(), checksum});
    }
    if (m.entries.empty()) throw StaleDatasetError("manifest lists no files");
    return m;
  } catch (const json::exception& e) {
    throw StaleDatasetError("malformed manifest in " + dir.string() + ": " + e.what());
  } catch (const UsageError& e) {
    throw StaleDatasetError("malformed manifest in " + dir.string() + ": " + e.what());
  }
}

std::vector<fs::path> verify_dataset(const fs::path& dir) {
  Manifest m = load_manifest(dir);
  std::vector<fs::path> paths;
  for (const auto& e : m.entries) {
    fs::path p = dir / e.path;
    Bytes bytes = read_whole(p);
    if (bytes.size() != e.size || fnv1a64(bytes) != e.checksum) {
      throw StaleDatasetError(p.string() + " does not match the manifest");
    }
    paths.push_back(std::move(p));
  }
  return paths;
}

}  // namespace colcache::bench
