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

#include "colcache/bench/runner.h"

#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>

#include "colcache/bench/cpu_time.h"
#include "colcache/bench/generator.h"
#include "colcache/common/error.h"

namespace colcache::bench {

namespace fs = std::filesystem;
using metacache::CacheConfig;
using metacache::MetadataCache;
using scan::CacheMode;
using scan::ScanEngine;

std::string_view csv_header() {
  return "scenario,mode,phase,run,cpu_ms,wall_ms,hits,misses,puts,evictions,bytes_cached,"
         "inflate_count,deserialize_count,encode_count,decode_count,rows_scanned,stripes_skipped";
}

std::string to_csv(const BenchRow& r) {
  char times[64];
  std::snprintf(times, sizeof times, "%.3f,%.3f", r.cpu_ms, r.wall_ms);
  const auto& s = r.stats;
  std::string out = r.scenario + ',' + std::string(scan::cache_mode_name(r.mode)) + ',' + r.phase + ',' +
                    std::to_string(r.run) + ',' + times;
  for (uint64_t v : {s.hits, s.misses, s.puts, s.evictions, s.bytes_cached, s.inflate_count, s.deserialize_count,
                     s.encode_count, s.decode_count, r.rows_scanned, r.stripes_skipped}) {
    out += ',' + std::to_string(v);
  }
  return out;
}

namespace {

template <typename T>
T parse_number(std::string_view field, std::string_view line) {
  T v{};
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || p != field.data() + field.size()) {
    throw ReportError("bad number '" + std::string(field) + "' in row: " + std::string(line));
  }
  return v;
}

}  // namespace

BenchRow parse_csv_row(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> f;
  size_t pos = 0;
  for (;;) {
    size_t comma = line.find(',', pos);
    f.push_back(line.substr(pos, comma == line.npos ? line.npos : comma - pos));
    if (comma == line.npos) break;
    pos = comma + 1;
  }
  if (f.size() != 17) throw ReportError("expected 17 fields, got " + std::to_string(f.size()) + ": " + std::string(line));

  BenchRow r;
  r.scenario = f[0];
  auto mode = scan::parse_cache_mode(f[1]);
  if (!mode) throw ReportError("unknown mode '" + std::string(f[1]) + "'");
  r.mode = *mode;
  if (f[2] != "cold" && f[2] != "warm") throw ReportError("unknown phase '" + std::string(f[2]) + "'");
  r.phase = f[2];
  r.run = parse_number<uint32_t>(f[3], line);
  r.cpu_ms = parse_number<double>(f[4], line);
  r.wall_ms = parse_number<double>(f[5], line);
  auto& s = r.stats;
  uint64_t* fields[] = {&s.hits,          &s.misses,      &s.puts,          &s.evictions,
                        &s.bytes_cached,  &s.inflate_count, &s.deserialize_count, &s.encode_count,
                        &s.decode_count,  &r.rows_scanned, &r.stripes_skipped};
  for (size_t i = 0; i < std::size(fields); ++i) *fields[i] = parse_number<uint64_t>(f[6 + i], line);
  return r;
}

void append_csv(const fs::path& path, const std::vector<BenchRow>& rows) {
  std::error_code ec;
  const bool fresh = !fs::exists(path, ec) || fs::file_size(path, ec) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot open " + path.string());
  if (fresh) out << csv_header() << '\n';
  for (const auto& r : rows) out << to_csv(r) << '\n';
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

unsigned workers_from_env(unsigned fallback) {
  const char* env = std::getenv("BENCH_WORKERS");
  if (!env) return fallback;
  std::string_view s(env);
  unsigned v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || v == 0) return fallback;
  return v;
}

namespace {

BenchRow run_pass(const ScanEngine& engine, std::span<const fs::path> paths, const Workload& w, unsigned workers) {
  BenchRow row;
  row.mode = engine.mode();
  const double cpu0 = process_cpu_ms();
  const double wall0 = wall_ms();
  scan::QueryResult q = engine.run_query(paths, w.predicate, w.aggregate, workers);
  row.wall_ms = wall_ms() - wall0;
  row.cpu_ms = process_cpu_ms() - cpu0;
  row.stats = q.stats_delta;
  row.rows_scanned = q.result.rows_scanned;
  row.stripes_skipped = q.result.stripes_skipped;
  row.value = q.result.value;
  return row;
}

Workload workload_for(WorkloadId id, const fs::path& first_file) {
  ScanEngine probe(nullptr, CacheMode::kNone);
  return make_workload(id, probe.open_file(first_file).column_types());
}

/// A private subdirectory of `root`, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const fs::path& root) {
    std::error_code ec;
    fs::create_directories(root, ec);
    std::string tmpl = (root / "run-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw BackendError("cannot create cache directory under " + root.string());
    path_ = tmpl;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;
  const fs::path& path() const noexcept { return path_; }

 private:
  fs::path path_;
};

}  // namespace

std::vector<BenchRow> run_benchmark(const RunConfig& config) {
  const std::vector<fs::path> paths = verify_dataset(config.data);
  const Workload w = workload_for(config.workload, paths.front());

  std::optional<ScratchDir> scratch;
  std::shared_ptr<MetadataCache> cache;
  if (config.mode != CacheMode::kNone) {
    CacheConfig cc;
    cc.capacity_bytes = config.capacity_bytes;
    cc.policy = config.policy;
    if (!config.cache_dir.empty()) {
      scratch.emplace(config.cache_dir);
      cc.backend = metacache::BackendKind::kDiskDir;
      cc.dir = scratch->path();
    }
    cache = MetadataCache::open(cc);
  }
  ScanEngine engine(cache, config.mode);

  std::vector<BenchRow> rows;
  auto record = [&](std::string phase, uint32_t run) {
    BenchRow r = run_pass(engine, paths, w, config.workers);
    r.scenario = workload_name(config.workload);
    r.phase = std::move(phase);
    r.run = run;
    rows.push_back(std::move(r));
  };
  record("cold", 0);
  for (uint32_t i = 0; i < config.reps; ++i) record("warm", i);
  return rows;
}

StressOutcome run_stress(const StressConfig& config) {
  if (config.mode == CacheMode::kNone) throw UsageError("stress needs mode bytes or objects");
  if (config.capacity_bytes == 0) throw UsageError("stress needs a capacity > 0");
  const std::vector<fs::path> paths = verify_dataset(config.data);
  const Workload w = workload_for(config.workload, paths.front());

  StressOutcome out;
  {
    CacheConfig unbounded;
    unbounded.capacity_bytes = std::numeric_limits<uint64_t>::max();
    ScanEngine dry(MetadataCache::open(unbounded), config.mode);
    out.working_set_bytes = run_pass(dry, paths, w, 1).stats.bytes_cached;
  }

  CacheConfig cc;
  cc.capacity_bytes = config.capacity_bytes;
  cc.policy = config.policy;
  auto cache = MetadataCache::open(cc);
  cache->set_trace_enabled(config.record_trace);
  ScanEngine engine(cache, config.mode);
  // Entries larger than the whole budget are skipped silently here.
  engine.set_warning_sink([](const std::string&) {});

  auto record = [&](std::string phase, uint32_t run) {
    BenchRow r = run_pass(engine, paths, w, config.workers);
    r.scenario = "stress-" + std::string(workload_name(config.workload));
    r.phase = std::move(phase);
    r.run = run;
    const uint64_t gets = r.stats.hits + r.stats.misses;
    out.hit_rates.push_back(gets ? static_cast<double>(r.stats.hits) / gets : 0.0);
    out.rows.push_back(std::move(r));
  };
  record("cold", 0);
  for (uint32_t i = 0; i < config.reps; ++i) record("warm", i);
  out.trace = cache->take_trace();
  return out;
}

}  // namespace colcache::bench
