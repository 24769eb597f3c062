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

#include <gtest/gtest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "colcache/bench/generator.h"
#include "colcache/bench/report.h"
#include "colcache/bench/runner.h"
#include "colcache/bench/splitmix64.h"
#include "colcache/bench/workload.h"
#include "colcache/colfile/reader.h"
#include "colcache/common/error.h"
#include "oracles.h"

namespace colcache::bench {
namespace {

namespace fs = std::filesystem;
using colfile::ColumnType;
using scan::CacheMode;

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "colcache-bench-XXXXXX").string();
    path_ = ::mkdtemp(tmpl.data());
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// splitmix64 written out from its published definition.
uint64_t splitmix_reference(uint64_t& x) {
  uint64_t z = (x += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

TEST(SplitMix64, FirstOutputFromZero) {
  uint64_t state = 0;
  EXPECT_EQ(splitmix_reference(state), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(SplitMix64(0).next(), 0xE220A8397B1DCDAFull);
}

TEST(SplitMix64, StreamMatchesReference) {
  uint64_t state = 12345;
  SplitMix64 g(12345);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(g.next(), splitmix_reference(state));
}

TEST(ColumnSpec, Parses) {
  EXPECT_EQ(parse_column_spec("int64x2,float64,utf8"),
            (std::vector<ColumnType>{ColumnType::kInt64, ColumnType::kInt64, ColumnType::kFloat64, ColumnType::kUtf8}));
  EXPECT_EQ(format_column_spec(parse_column_spec("int64x2,float64,utf8")), "int64x2,float64,utf8");
  EXPECT_THROW(parse_column_spec(""), UsageError);
  EXPECT_THROW(parse_column_spec("int32"), UsageError);
  EXPECT_THROW(parse_column_spec("int64x0"), UsageError);
  EXPECT_THROW(parse_column_spec("int64,"), UsageError);
}

TEST(Generator, ValuesFollowTheDrawRules) {
  GenSpec spec;
  spec.seed = 99;
  spec.rows = 50;
  spec.columns = {ColumnType::kInt64, ColumnType::kFloat64, ColumnType::kUtf8};
  auto rows = generate_rows(spec, 3);
  uint64_t state = 99 ^ 3;
  for (const auto& row : rows) {
    ASSERT_EQ(std::get<int64_t>(row[0]), static_cast<int64_t>(splitmix_reference(state) % 1000000));
    ASSERT_EQ(std::get<double>(row[1]), std::ldexp(static_cast<double>(splitmix_reference(state)), -64));
    const auto& s = std::get<std::string>(row[2]);
    ASSERT_EQ(s.size(), 8 + splitmix_reference(state) % 9);
    for (char c : s) ASSERT_EQ(c, static_cast<char>('a' + splitmix_reference(state) % 26));
  }
}

TEST(Generator, ManifestForSmallSpec) {
  TempDir dir;
  GenSpec spec;
  spec.files = 2;
  spec.stripes = 2;
  spec.rows = 1024;
  spec.columns = {ColumnType::kInt64, ColumnType::kInt64};
  spec.out = dir.path() / "ds";
  Manifest m = generate_dataset(spec);
  ASSERT_EQ(m.entries.size(), 2u);
  for (const auto& e : m.entries) {
    auto reader = colfile::FileReader::open(spec.out / e.path);
    auto footer = colfile::read_footer(*reader);
    EXPECT_EQ(footer.num_rows, 2048u);
    EXPECT_EQ(footer.stripes.size(), 2u);
    EXPECT_EQ(e.size, fs::file_size(spec.out / e.path));
  }
  Manifest loaded = load_manifest(spec.out);
  EXPECT_EQ(loaded.entries, m.entries);
  EXPECT_EQ(loaded.spec.columns, spec.columns);
  EXPECT_EQ(verify_dataset(spec.out).size(), 2u);
}

TEST(Generator, Deterministic) {
  TempDir dir;
  GenSpec spec;
  spec.seed = 5;
  spec.files = 3;
  spec.rows = 700;
  spec.columns = parse_column_spec("int64,utf8,float64");
  spec.out = dir.path() / "a";
  Manifest a = generate_dataset(spec);
  spec.out = dir.path() / "b";
  Manifest b = generate_dataset(spec);
  EXPECT_EQ(a.entries, b.entries);
  spec.seed = 6;
  spec.out = dir.path() / "c";
  EXPECT_NE(generate_dataset(spec).entries, a.entries);
}

TEST(Generator, RefusesNonEmptyDirectory) {
  TempDir dir;
  std::ofstream(dir.path() / "x") << "x";
  GenSpec spec;
  spec.out = dir.path();
  EXPECT_THROW(generate_dataset(spec), PreconditionError);
  spec.files = 0;
  spec.out = dir.path() / "fresh";
  EXPECT_THROW(generate_dataset(spec), PreconditionError);
}

TEST(Generator, TamperedFileIsStale) {
  TempDir dir;
  GenSpec spec;
  spec.out = dir.path() / "ds";
  Manifest m = generate_dataset(spec);
  {
    std::fstream f(spec.out / m.entries[0].path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(100);
    f.put('\x7f');
  }
  EXPECT_THROW(verify_dataset(spec.out), StaleDatasetError);
  EXPECT_THROW(verify_dataset(dir.path()), StaleDatasetError);
}

TEST(Workloads, ShapesAndErrors) {
  std::vector<ColumnType> types = {ColumnType::kUtf8, ColumnType::kInt64};
  Workload w1 = make_workload(WorkloadId::kW1, types);
  ASSERT_EQ(w1.predicate.atoms.size(), 1u);
  EXPECT_EQ(w1.predicate.atoms[0].column, 1u);
  EXPECT_EQ(w1.aggregate.kind, scan::AggKind::kCount);
  EXPECT_EQ(make_workload(WorkloadId::kW2, types).predicate.atoms.size(), 2u);
  EXPECT_TRUE(make_workload(WorkloadId::kW3, types).predicate.always_true());
  std::vector<ColumnType> strings = {ColumnType::kUtf8};
  EXPECT_THROW(make_workload(WorkloadId::kW1, strings), UsageError);
  EXPECT_EQ(parse_workload("W2"), WorkloadId::kW2);
  EXPECT_FALSE(parse_workload("W4"));
}

class BenchDataset : public ::testing::Test {
 protected:
  static constexpr uint32_t kFiles = 3;
  static constexpr uint32_t kStripes = 4;

  void SetUp() override {
    GenSpec spec;
    spec.seed = 17;
    spec.files = kFiles;
    spec.stripes = kStripes;
    spec.rows = 1500;
    spec.columns = parse_column_spec("int64,float64,utf8");
    spec.out = dir_.path() / "ds";
    generate_dataset(spec);
    data_ = spec.out;
  }

  RunConfig config(WorkloadId w, CacheMode mode) {
    RunConfig c;
    c.data = data_;
    c.workload = w;
    c.mode = mode;
    c.reps = 3;
    c.workers = 2;
    return c;
  }

  static constexpr uint64_t kSections = kFiles * (1 + 2 * kStripes);
  TempDir dir_;
  fs::path data_;
};

TEST_F(BenchDataset, WorkloadsAgreeAcrossModes) {
  for (auto w : {WorkloadId::kW1, WorkloadId::kW2, WorkloadId::kW3}) {
    std::vector<std::vector<BenchRow>> runs;
    for (auto mode : {CacheMode::kNone, CacheMode::kBytes, CacheMode::kObjects}) {
      runs.push_back(run_benchmark(config(w, mode)));
    }
    for (const auto& rows : runs) {
      ASSERT_EQ(rows.size(), 4u);
      for (const auto& r : rows) {
        EXPECT_TRUE(testing::same_scalar(r.value, runs[0][0].value)) << workload_name(w);
        EXPECT_EQ(r.rows_scanned, runs[0][0].rows_scanned);
        EXPECT_EQ(r.stripes_skipped, runs[0][0].stripes_skipped);
      }
    }
  }
}

TEST_F(BenchDataset, NoneModeProfilesMatch) {
  auto rows = run_benchmark(config(WorkloadId::kW2, CacheMode::kNone));
  for (const auto& r : rows) {
    EXPECT_EQ(r.stats.inflate_count, kSections);
    EXPECT_EQ(r.stats.deserialize_count, kSections);
    EXPECT_EQ(r.stats.hits + r.stats.misses + r.stats.puts, 0u);
    EXPECT_EQ(r.stats.encode_count + r.stats.decode_count, 0u);
  }
}

TEST_F(BenchDataset, CounterAccountingPerMode) {
  auto bytes = run_benchmark(config(WorkloadId::kW1, CacheMode::kBytes));
  EXPECT_EQ(bytes[0].phase, "cold");
  EXPECT_EQ(bytes[0].stats.misses, kSections);
  EXPECT_EQ(bytes[0].stats.puts, kSections);
  EXPECT_EQ(bytes[0].stats.inflate_count, kSections);
  EXPECT_EQ(bytes[0].stats.encode_count, 0u);
  for (size_t i = 1; i < bytes.size(); ++i) {
    EXPECT_EQ(bytes[i].phase, "warm");
    EXPECT_EQ(bytes[i].run, i - 1);
    EXPECT_EQ(bytes[i].stats.hits, kSections);
    EXPECT_EQ(bytes[i].stats.inflate_count, 0u);
    EXPECT_EQ(bytes[i].stats.deserialize_count, kSections);
  }

  auto objects = run_benchmark(config(WorkloadId::kW1, CacheMode::kObjects));
  EXPECT_EQ(objects[0].stats.encode_count, kSections);
  EXPECT_EQ(objects[0].stats.deserialize_count, kSections);
  for (size_t i = 1; i < objects.size(); ++i) {
    EXPECT_EQ(objects[i].stats.inflate_count, 0u);
    EXPECT_EQ(objects[i].stats.deserialize_count, 0u);
    EXPECT_EQ(objects[i].stats.decode_count, kSections);
  }
}

TEST_F(BenchDataset, DiskBackendRun) {
  RunConfig c = config(WorkloadId::kW3, CacheMode::kObjects);
  c.cache_dir = dir_.path() / "cache";
  auto rows = run_benchmark(c);
  EXPECT_EQ(rows.back().stats.hits, kSections);
  EXPECT_EQ(rows.back().stats.inflate_count, 0u);
  EXPECT_TRUE(fs::is_empty(c.cache_dir));  // scratch space is cleaned up
}

TEST_F(BenchDataset, StressWithRoomHasNoEvictions) {
  StressConfig c;
  c.data = data_;
  c.capacity_bytes = 1ull << 30;
  c.reps = 2;
  StressOutcome out = run_stress(c);
  EXPECT_GT(out.working_set_bytes, 0u);
  for (const auto& r : out.rows) EXPECT_EQ(r.stats.evictions, 0u);
  EXPECT_EQ(out.hit_rates.back(), 1.0);
}

TEST_F(BenchDataset, StressUnderPressureMatchesSimulator) {
  for (auto policy : {metacache::EvictionPolicy::kFifo, metacache::EvictionPolicy::kLru,
                      metacache::EvictionPolicy::kLfu}) {
    StressConfig c;
    c.data = data_;
    c.reps = 3;
    c.policy = policy;
    c.record_trace = true;
    c.workers = 2;
    StressOutcome probe = run_stress({.data = data_, .capacity_bytes = 1ull << 30, .reps = 0, .workers = 1});
    c.capacity_bytes = probe.working_set_bytes / 2;
    StressOutcome out = run_stress(c);
    EXPECT_LT(out.hit_rates.back(), 1.0);
    uint64_t evictions = 0;
    for (const auto& r : out.rows) evictions += r.stats.evictions;
    EXPECT_GT(evictions, 0u);

    testing::PolicySimulator sim(policy, c.capacity_bytes);
    uint64_t trace_hits = 0;
    for (const auto& ev : out.trace) {
      if (ev.op == metacache::TraceEvent::Op::kPut) {
        sim.put(ev.key, ev.charge);
      } else {
        ASSERT_EQ(sim.get(ev.key), ev.hit);
        trace_hits += ev.hit;
      }
    }
    uint64_t reported_hits = 0;
    for (const auto& r : out.rows) reported_hits += r.stats.hits;
    EXPECT_EQ(sim.hits(), reported_hits) << metacache::policy_name(policy);
    EXPECT_EQ(trace_hits, reported_hits);
    EXPECT_EQ(sim.evictions(), evictions);
  }
}

TEST(Csv, RoundTrip) {
  BenchRow r;
  r.scenario = "W2";
  r.mode = CacheMode::kObjects;
  r.phase = "warm";
  r.run = 3;
  r.cpu_ms = 12.5;
  r.wall_ms = 20.25;
  r.stats.hits = 7;
  r.stats.decode_count = 7;
  r.stats.bytes_cached = 999;
  r.rows_scanned = 100;
  r.stripes_skipped = 2;
  std::string line = to_csv(r);
  EXPECT_EQ(line, "W2,objects,warm,3,12.500,20.250,7,0,0,0,999,0,0,0,7,100,2");
  BenchRow back = parse_csv_row(line);
  EXPECT_EQ(to_csv(back), line);
  EXPECT_THROW(parse_csv_row("W2,objects,warm"), ReportError);
  EXPECT_THROW(parse_csv_row("W2,fast,warm,3,1,1,0,0,0,0,0,0,0,0,0,0,0"), ReportError);
  EXPECT_THROW(parse_csv_row("W2,none,hot,3,1,1,0,0,0,0,0,0,0,0,0,0,0"), ReportError);
  EXPECT_THROW(parse_csv_row("W2,none,warm,x,1,1,0,0,0,0,0,0,0,0,0,0,0"), ReportError);
}

TEST(Csv, AppendWritesHeaderOnce) {
  TempDir dir;
  BenchRow r;
  r.scenario = "W1";
  r.phase = "cold";
  append_csv(dir.path() / "out.csv", {r});
  append_csv(dir.path() / "out.csv", {r, r});
  std::ifstream in(dir.path() / "out.csv");
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, csv_header());
  EXPECT_EQ(read_csv(dir.path() / "out.csv").size(), 3u);
}

TEST(WorkersEnv, OverridesDefault) {
  ::setenv("BENCH_WORKERS", "7", 1);
  EXPECT_EQ(workers_from_env(4), 7u);
  ::setenv("BENCH_WORKERS", "zero", 1);
  EXPECT_EQ(workers_from_env(4), 4u);
  ::unsetenv("BENCH_WORKERS");
  EXPECT_EQ(workers_from_env(4), 4u);
}

std::vector<BenchRow> synthetic(double none_cold, double bytes_cold, double objects_cold, double none_warm,
                                double bytes_warm, double objects_warm) {
  std::vector<BenchRow> rows;
  auto add = [&](CacheMode m, const char* phase, double cpu) {
    BenchRow r;
    r.scenario = "S";
    r.mode = m;
    r.phase = phase;
    r.cpu_ms = cpu;
    rows.push_back(r);
  };
  add(CacheMode::kNone, "cold", none_cold);
  add(CacheMode::kBytes, "cold", bytes_cold);
  add(CacheMode::kObjects, "cold", objects_cold);
  add(CacheMode::kNone, "warm", none_warm);
  add(CacheMode::kBytes, "warm", bytes_warm);
  add(CacheMode::kObjects, "warm", objects_warm);
  return rows;
}

TEST(Report, OverheadAndReductionArithmetic) {
  Report rep = build_report(synthetic(1000, 1150, 1200, 1000, 850, 700));
  const auto& s = rep.scenarios.at(0);
  EXPECT_NEAR(*s.cold_overhead_bytes, 15.0, 1e-9);
  EXPECT_NEAR(*s.cold_overhead_objects, 20.0, 1e-9);
  EXPECT_NEAR(*s.warm_reduction_objects, 30.0, 1e-9);
  EXPECT_NEAR(*s.warm_reduction_bytes, 15.0, 1e-9);
  EXPECT_TRUE(rep.all_orderings_hold());
  EXPECT_NE(format_report_text(rep).find("+15.0%"), std::string::npos);
}

TEST(Report, EqualMediansNotEstablished) {
  Report rep = build_report(synthetic(1000, 1000, 1000, 1000, 1000, 1000));
  const auto& s = rep.scenarios.at(0);
  EXPECT_EQ(*s.cold_overhead_bytes, 0.0);
  EXPECT_FALSE(s.cold_order_holds);
  EXPECT_FALSE(s.warm_order_holds);
  EXPECT_FALSE(rep.all_orderings_hold());
  EXPECT_NE(format_report_text(rep).find("not established"), std::string::npos);
}

TEST(Report, MissingModeListed) {
  auto rows = synthetic(1, 2, 3, 3, 2, 1);
  std::erase_if(rows, [](const BenchRow& r) { return r.mode == CacheMode::kBytes && r.phase == "warm"; });
  try {
    build_report(rows);
    FAIL() << "expected ReportError";
  } catch (const ReportError& e) {
    EXPECT_NE(std::string(e.what()).find("S/bytes/warm"), std::string::npos);
  }
}

TEST(Report, UsesMedians) {
  EXPECT_EQ(median({5, 1, 3}), 3);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
  auto rows = synthetic(1000, 1100, 1200, 1000, 900, 800);
  BenchRow outlier = rows[0];
  outlier.cpu_ms = 50000;
  rows.push_back(outlier);
  rows.push_back(rows[0]);
  EXPECT_NEAR(*build_report(rows).scenarios[0].cold_overhead_bytes, 10.0, 1e-9);
}

TEST(Report, CsvOutputRecomputable) {
  Report rep = build_report(synthetic(200, 230, 260, 100, 90, 70));
  std::string csv = format_report_csv(rep);
  EXPECT_NE(csv.find("S,bytes,230.000,90.000,15.000,10.000"), std::string::npos);
  EXPECT_NE(csv.find("S,objects,260.000,70.000,30.000,30.000"), std::string::npos);
}

}  // namespace
}  // namespace colcache::bench
