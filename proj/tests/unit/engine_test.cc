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

#include <filesystem>
#include <fstream>

#include "colcache/colfile/metadata_codec.h"
#include "colcache/colfile/writer.h"
#include "colcache/common/error.h"
#include "colcache/scan/engine.h"
#include "oracles.h"

namespace colcache::scan {
namespace {

namespace fs = std::filesystem;
using colfile::ColumnType;
using colfile::Row;
using colfile::Schema;
using metacache::CacheConfig;
using metacache::MetadataCache;

constexpr CacheMode kAllModes[] = {CacheMode::kNone, CacheMode::kBytes, CacheMode::kObjects};

struct TestFile {
  Schema schema;
  std::vector<Row> rows;
  uint64_t stripe_rows;
  std::shared_ptr<const colfile::FileReader> reader;
  std::string identity;
};

TestFile make_file(Schema schema, std::vector<Row> rows, uint64_t stripe_rows, std::string identity) {
  auto written = colfile::write_file(schema, rows, {.stripe_rows = stripe_rows});
  auto reader = colfile::FileReader::from_bytes(std::move(written.bytes));
  return {std::move(schema), std::move(rows), stripe_rows, std::move(reader), std::move(identity)};
}

std::shared_ptr<MetadataCache> cache_for(CacheMode mode, uint64_t capacity = 64ull << 20) {
  if (mode == CacheMode::kNone) return nullptr;
  CacheConfig cfg;
  cfg.capacity_bytes = capacity;
  return MetadataCache::open(cfg);
}

FileHandle open(const ScanEngine& e, const TestFile& f) { return e.open_file(f.reader, f.identity); }

class Warnings {
 public:
  explicit Warnings(ScanEngine& e) {
    e.set_warning_sink([this](const std::string& m) { messages.push_back(m); });
  }
  std::vector<std::string> messages;
};

TestFile small_file() {
  Schema schema = {{"a", ColumnType::kInt64}, {"s", ColumnType::kUtf8}};
  std::vector<Row> rows;
  for (int64_t i = 0; i < 3000; ++i) rows.push_back({i, std::string(1 + i % 5, 'a' + i % 3)});
  return make_file(schema, rows, 1000, "mem://small");
}

TEST(OpenFile, NoneModeInflatesEveryTime) {
  ScanEngine e(nullptr, CacheMode::kNone);
  TestFile f = small_file();
  open(e, f);
  auto s1 = e.cache().stats();
  open(e, f);
  auto d = metacache::CacheStats::delta(s1, e.cache().stats());
  EXPECT_EQ(s1.inflate_count, 1u);
  EXPECT_EQ(d.inflate_count, 1u);
  EXPECT_EQ(d.deserialize_count, 1u);
  EXPECT_EQ(e.cache().stats().entries, 0u);
}

TEST(OpenFile, BytesModeReparsesOnHit) {
  ScanEngine e(cache_for(CacheMode::kBytes), CacheMode::kBytes);
  TestFile f = small_file();
  open(e, f);
  auto s1 = e.cache().stats();
  EXPECT_EQ(s1.inflate_count, 1u);
  EXPECT_EQ(s1.encode_count, 0u);
  open(e, f);
  auto d = metacache::CacheStats::delta(s1, e.cache().stats());
  EXPECT_EQ(d.inflate_count, 0u);
  EXPECT_EQ(d.deserialize_count, 1u);
  EXPECT_EQ(d.hits, 1u);
}

TEST(OpenFile, ObjectsModeDecodesOnHit) {
  ScanEngine e(cache_for(CacheMode::kObjects), CacheMode::kObjects);
  TestFile f = small_file();
  FileHandle cold = open(e, f);
  auto s1 = e.cache().stats();
  EXPECT_EQ(s1.encode_count, 1u);
  EXPECT_FALSE(cold.footer().is_view());
  FileHandle warm = open(e, f);
  auto d = metacache::CacheStats::delta(s1, e.cache().stats());
  EXPECT_EQ(d.inflate_count, 0u);
  EXPECT_EQ(d.deserialize_count, 0u);
  EXPECT_EQ(d.decode_count, 1u);
  EXPECT_TRUE(warm.footer().is_view());
  EXPECT_EQ(warm.footer().materialize(), cold.footer().materialize());
}

TEST(OpenFile, NonNoneModeNeedsCache) {
  EXPECT_THROW(ScanEngine(nullptr, CacheMode::kBytes), PreconditionError);
}

TEST(OpenFile, MissingPathIsIoError) {
  ScanEngine e(nullptr, CacheMode::kNone);
  EXPECT_THROW(e.open_file("/nonexistent/colcache/file.ocf"), IoError);
}

TEST(StripeMetadata, OutOfRangeOrdinal) {
  ScanEngine e(nullptr, CacheMode::kNone);
  TestFile f = small_file();
  EXPECT_THROW(e.load_stripe_metadata(open(e, f), 3), PreconditionError);
}

TEST(StripeMetadata, EqualsDirectParseAcrossModes) {
  testing::Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    Schema schema = testing::random_schema(rng);
    TestFile f = make_file(schema, testing::random_rows(rng, schema, 1 + rng() % 3000), 1 + rng() % 1500,
                           "mem://r" + std::to_string(trial));
    const auto footer = colfile::read_footer(*f.reader);
    const auto types = footer.column_types();
    for (CacheMode mode : {CacheMode::kBytes, CacheMode::kObjects}) {
      ScanEngine e(cache_for(mode), mode);
      for (int pass = 0; pass < 2; ++pass) {
        FileHandle h = open(e, f);
        ASSERT_EQ(h.footer().materialize(), footer);
        for (uint32_t s = 0; s < footer.stripes.size(); ++s) {
          StripeMeta m = e.load_stripe_metadata(h, s);
          ASSERT_EQ(m.footer(), colfile::read_stripe_footer(*f.reader, footer.stripes[s]));
          ASSERT_EQ(m.index(), colfile::read_stripe_index(*f.reader, footer.stripes[s], types));
        }
      }
    }
  }
}

TEST(StripeMetadata, WarmObjectsAccessSkipsInflate) {
  ScanEngine e(cache_for(CacheMode::kObjects), CacheMode::kObjects);
  TestFile f = small_file();
  FileHandle h = open(e, f);
  e.load_stripe_metadata(h, 1);
  auto before = e.cache().stats();
  e.load_stripe_metadata(h, 1);
  auto d = metacache::CacheStats::delta(before, e.cache().stats());
  EXPECT_EQ(d.inflate_count, 0u);
  EXPECT_EQ(d.deserialize_count, 0u);
  EXPECT_EQ(d.decode_count, 2u);
}

TEST(ScanSplit, CountAllOverThreeRows) {
  ScanEngine e(nullptr, CacheMode::kNone);
  TestFile f = make_file({{"a", ColumnType::kInt64}}, {{int64_t{1}}, {int64_t{2}}, {int64_t{3}}}, 1024, "mem://3");
  ScanResult r = e.scan_split({open(e, f), 0}, {}, {AggKind::kCount, 0});
  EXPECT_EQ(r.value, colfile::Scalar(int64_t{3}));
  EXPECT_EQ(r.rows_scanned, 3u);
}

TEST(ScanSplit, PredicateAboveMaxSkipsEverything) {
  ScanEngine e(nullptr, CacheMode::kNone);
  TestFile f = small_file();
  FileHandle h = open(e, f);
  Predicate p{{{0, CompareOp::kGt, int64_t{2999}}}};
  for (uint32_t s = 0; s < 3; ++s) {
    ScanResult r = e.scan_split({h, s}, p, {AggKind::kSum, 0});
    EXPECT_EQ(r.rows_matched, 0u);
    EXPECT_EQ(r.rows_scanned, 0u);
    EXPECT_EQ(r.stripes_skipped, 1u);
    EXPECT_EQ(r.row_groups_skipped, 1u);
    EXPECT_EQ(r.value, colfile::Scalar(int64_t{0}));
  }
}

TEST(ScanSplit, RowGroupsPartiallySkipped) {
  ScanEngine e(nullptr, CacheMode::kNone);
  Schema schema = {{"a", ColumnType::kInt64}};
  std::vector<Row> rows;
  for (int64_t i = 0; i < 4096; ++i) rows.push_back({i});
  TestFile f = make_file(schema, rows, 4096, "mem://rg");
  Predicate p{{{0, CompareOp::kGe, int64_t{1500}}, {0, CompareOp::kLt, int64_t{2100}}}};
  ScanResult r = e.scan_split({open(e, f), 0}, p, {AggKind::kCount, 0});
  EXPECT_EQ(r.value, colfile::Scalar(int64_t{600}));
  EXPECT_EQ(r.row_groups_scanned, 2u);
  EXPECT_EQ(r.row_groups_skipped, 2u);
  EXPECT_EQ(r.rows_scanned, 2048u);
}

TEST(ScanSplit, SumOverUtf8Rejected) {
  ScanEngine e(nullptr, CacheMode::kNone);
  TestFile f = small_file();
  EXPECT_THROW(e.scan_split({open(e, f), 0}, {}, {AggKind::kSum, 1}), SchemaError);
  EXPECT_THROW(e.scan_split({open(e, f), 0}, {}, {AggKind::kMin, 5}), SchemaError);
}

TEST(ScanSplit, Utf8FilterAndMinMax) {
  ScanEngine e(nullptr, CacheMode::kNone);
  TestFile f = small_file();
  FileHandle h = open(e, f);
  Predicate p{{{1, CompareOp::kGe, std::string("cc")}}};
  auto r = e.run_query(std::vector<FileHandle>{h}, p, {AggKind::kMax, 1});
  auto o = testing::oracle_query(f.rows, f.schema, p, {AggKind::kMax, 1}, f.stripe_rows);
  EXPECT_EQ(r.result.value, o.value);
  EXPECT_EQ(r.result.rows_matched, o.matched);
  EXPECT_EQ(r.result.value, colfile::Scalar(std::string("ccccc")));
}

// Every visited row group is either scanned or skipped.
void expect_group_accounting(const ScanResult& r, uint64_t total_groups) {
  EXPECT_EQ(r.row_groups_scanned + r.row_groups_skipped, total_groups);
}

TEST(RunQuery, RandomWorkloadsMatchOracleInEveryMode) {
  testing::Rng rng(72);
  for (int trial = 0; trial < 1000; ++trial) {
    Schema schema = testing::random_schema(rng);
    const uint64_t n = 1 + rng() % 2500;
    const uint64_t stripe_rows = 1 + rng() % 1500;
    auto rows = testing::random_rows(rng, schema, n, static_cast<int>(rng() % 40), true, 30);
    TestFile f = make_file(schema, rows, stripe_rows, "mem://q" + std::to_string(trial));
    Predicate p = testing::random_predicate(rng, schema, 30);
    Aggregate agg = testing::random_aggregate(rng, schema);
    auto oracle = testing::oracle_query(rows, schema, p, agg, stripe_rows);

    uint64_t total_groups = 0;
    for (uint64_t s = 0; s < n; s += stripe_rows) total_groups += colfile::row_groups_for(std::min(stripe_rows, n - s));

    std::optional<ScanResult> first;
    for (CacheMode mode : kAllModes) {
      ScanEngine e(cache_for(mode), mode);
      for (int pass = 0; pass < 2; ++pass) {
        QueryResult q = e.run_query(std::vector<FileHandle>{open(e, f)}, p, agg);
        ASSERT_TRUE(testing::same_scalar(q.result.value, oracle.value))
            << "trial " << trial << " mode " << cache_mode_name(mode) << " " << p.to_string();
        ASSERT_EQ(q.result.rows_matched, oracle.matched) << trial;
        expect_group_accounting(q.result, total_groups);
        if (!first) first = q.result;
        ASSERT_EQ(q.result.rows_scanned, first->rows_scanned);
        ASSERT_EQ(q.result.row_groups_skipped, first->row_groups_skipped);
        ASSERT_EQ(q.result.stripes_skipped, first->stripes_skipped);
      }
    }
  }
}

TEST(RunQuery, TwoFilesCountIsSumOfCounts) {
  ScanEngine e(nullptr, CacheMode::kNone);
  Schema schema = {{"a", ColumnType::kInt64}};
  TestFile f1 = make_file(schema, {{int64_t{1}}, {int64_t{2}}}, 10, "mem://f1");
  TestFile f2 = make_file(schema, {{int64_t{3}}, {int64_t{4}}, {int64_t{5}}}, 10, "mem://f2");
  auto q = e.run_query(std::vector<FileHandle>{open(e, f1), open(e, f2)}, {}, {AggKind::kCount, 0});
  EXPECT_EQ(q.result.value, colfile::Scalar(int64_t{5}));
}

TEST(RunQuery, SecondObjectsPassInflatesNothing) {
  auto cache = cache_for(CacheMode::kObjects);
  ScanEngine e(cache, CacheMode::kObjects);
  TestFile f = small_file();
  Predicate p{{{0, CompareOp::kLt, int64_t{1500}}}};
  auto first = e.run_query(std::vector<FileHandle>{open(e, f)}, p, {AggKind::kSum, 0});
  auto second = e.run_query(std::vector<FileHandle>{open(e, f)}, p, {AggKind::kSum, 0});
  EXPECT_GT(first.stats_delta.inflate_count, 0u);
  EXPECT_EQ(second.stats_delta.inflate_count, 0u);
  EXPECT_EQ(second.stats_delta.deserialize_count, 0u);
  EXPECT_EQ(second.result, first.result);
}

TEST(RunQuery, WorkersDoNotChangeResult) {
  testing::Rng rng(73);
  Schema schema = {{"x", ColumnType::kFloat64}, {"y", ColumnType::kInt64}};
  std::vector<TestFile> files;
  for (int i = 0; i < 4; ++i) {
    files.push_back(make_file(schema, testing::random_rows(rng, schema, 3000), 700, "mem://w" + std::to_string(i)));
  }
  for (CacheMode mode : kAllModes) {
    ScanEngine e(cache_for(mode), mode);
    std::vector<FileHandle> handles;
    for (const auto& f : files) handles.push_back(open(e, f));
    Predicate p{{{1, CompareOp::kGt, int64_t{0}}}};
    auto one = e.run_query(handles, p, {AggKind::kSum, 0}, 1);
    auto four = e.run_query(handles, p, {AggKind::kSum, 0}, 4);
    EXPECT_TRUE(testing::same_scalar(one.result.value, four.result.value));
    EXPECT_EQ(one.result.rows_matched, four.result.rows_matched);
  }
}

TEST(RunQuery, EmptyDatasetRejected) {
  ScanEngine e(nullptr, CacheMode::kNone);
  EXPECT_THROW(e.run_query(std::vector<FileHandle>{}, {}, {}), PreconditionError);
  EXPECT_THROW(e.run_query(std::vector<fs::path>{}, {}, {}), PreconditionError);
}

TEST(RunQuery, ErrorsCarryFileIdentity) {
  ScanEngine e(nullptr, CacheMode::kNone);
  Schema schema = {{"a", ColumnType::kInt64}};
  TestFile good = make_file(schema, {{int64_t{1}}}, 10, "mem://good");
  Schema other = {{"a", ColumnType::kUtf8}};
  TestFile bad = make_file(other, {{std::string("x")}}, 10, "mem://bad");
  try {
    e.run_query(std::vector<FileHandle>{open(e, good), open(e, bad)}, {{{0, CompareOp::kEq, int64_t{1}}}},
                {AggKind::kCount, 0});
    FAIL() << "expected QueryFileError";
  } catch (const QueryFileError& err) {
    EXPECT_EQ(err.identity(), "mem://bad");
  }
}

// Stripes hold disjoint value ranges: stripe s holds [1000 s, 1000 s + 999].
TEST(Pushdown, DisjointStripesSkippedExactly) {
  Schema schema = {{"v", ColumnType::kInt64}};
  std::vector<Row> rows;
  for (int64_t i = 0; i < 10 * 1000; ++i) rows.push_back({i});
  TestFile f = make_file(schema, rows, 1000, "mem://disjoint");
  struct Case {
    Predicate p;
    uint64_t expected_skips;
  };
  auto lo_hi = [](int64_t lo, int64_t hi) {
    return Predicate{{{0, CompareOp::kGe, lo}, {0, CompareOp::kLt, hi}}};
  };
  const int64_t bounds[][2] = {{3000, 5000}, {2500, 2501}, {0, 10000}, {-5, 0}, {9999, 20000}, {1999, 2001}};
  for (CacheMode mode : kAllModes) {
    ScanEngine e(cache_for(mode), mode);
    for (const auto& b : bounds) {
      uint64_t expected = 0;
      for (int64_t s = 0; s < 10; ++s) {
        const int64_t lo = s * 1000, hi = s * 1000 + 999;
        if (hi < b[0] || lo >= b[1]) ++expected;
      }
      auto q = e.run_query(std::vector<FileHandle>{open(e, f)}, lo_hi(b[0], b[1]), {AggKind::kCount, 0});
      EXPECT_EQ(q.result.stripes_skipped, expected) << b[0] << ".." << b[1];
      EXPECT_EQ(q.result.value, colfile::Scalar(std::max<int64_t>(0, std::min<int64_t>(b[1], 10000) - std::max<int64_t>(b[0], 0))));
    }
  }
}

TEST(WarmCounters, DecodesEqualSectionAccesses) {
  auto cache = cache_for(CacheMode::kObjects);
  ScanEngine e(cache, CacheMode::kObjects);
  std::vector<TestFile> files = {small_file()};
  files.push_back(make_file(files[0].schema, files[0].rows, 500, "mem://small2"));
  auto handles = [&] {
    std::vector<FileHandle> h;
    for (const auto& f : files) h.push_back(open(e, f));
    return h;
  };
  auto before = e.cache().stats();
  e.run_query(handles(), {}, {AggKind::kCount, 0});
  auto mid = e.cache().stats();
  e.run_query(handles(), {}, {AggKind::kCount, 0});
  auto warm = metacache::CacheStats::delta(mid, e.cache().stats());
  // Footer plus two sections per stripe: (1 + 2*3) + (1 + 2*6).
  EXPECT_EQ(warm.decode_count, 20u);
  EXPECT_EQ(warm.hits, 20u);
  EXPECT_EQ(warm.inflate_count, 0u);
  auto cold = metacache::CacheStats::delta(before, mid);
  EXPECT_EQ(cold.encode_count, 20u);
  EXPECT_EQ(cold.puts, 20u);
}

TEST(CacheFallback, WrongKindEntryReadsFromStorage) {
  auto cache = cache_for(CacheMode::kBytes);
  TestFile f = small_file();
  ScanEngine bytes_engine(cache, CacheMode::kBytes);
  auto expected = bytes_engine.run_query(std::vector<FileHandle>{open(bytes_engine, f)}, {}, {AggKind::kSum, 0});

  ScanEngine objects_engine(cache, CacheMode::kObjects);
  Warnings w(objects_engine);
  auto before = cache->stats();
  auto got = objects_engine.run_query(std::vector<FileHandle>{open(objects_engine, f)}, {}, {AggKind::kSum, 0});
  EXPECT_EQ(got.result, expected.result);
  auto d = metacache::CacheStats::delta(before, cache->stats());
  EXPECT_EQ(d.inflate_count, 7u);  // every section came from storage again
  EXPECT_EQ(d.encode_count, 7u);   // and was replaced with an object buffer
  EXPECT_EQ(w.messages.size(), 7u);
}

TEST(CacheFallback, UnparsableCachedBytesWarnAndRecover) {
  auto cache = cache_for(CacheMode::kBytes);
  ScanEngine e(cache, CacheMode::kBytes);
  Warnings w(e);
  TestFile f = small_file();
  FileHandle h = open(e, f);
  cache->put(metacache::CacheKey::footer(h.file_id()), metacache::CacheValue::raw(Bytes{1, 2, 3}));
  FileHandle again = open(e, f);
  EXPECT_EQ(again.footer().num_rows(), 3000u);
  EXPECT_EQ(w.messages.size(), 1u);
  // The bad entry was replaced on the way through.
  FileHandle third = open(e, f);
  EXPECT_EQ(w.messages.size(), 1u);
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "colcache-engine-XXXXXX").string();
    path_ = ::mkdtemp(tmpl.data());
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

TEST(CacheFallback, DiskReadFailureDegradesToStorage) {
  TempDir dir;
  CacheConfig cfg;
  cfg.backend = metacache::BackendKind::kDiskDir;
  cfg.dir = dir.path();
  auto cache = MetadataCache::open(cfg);
  ScanEngine e(cache, CacheMode::kObjects);
  Warnings w(e);
  TestFile f = small_file();
  auto expected = e.run_query(std::vector<FileHandle>{open(e, f)}, {}, {AggKind::kMax, 1});
  for (const auto& entry : fs::directory_iterator(dir.path())) fs::remove(entry.path());
  auto got = e.run_query(std::vector<FileHandle>{open(e, f)}, {}, {AggKind::kMax, 1});
  EXPECT_EQ(got.result, expected.result);
  EXPECT_EQ(w.messages.size(), 7u);
}

TEST(DiskCachedEngine, WarmAcrossReopen) {
  TempDir dir;
  CacheConfig cfg;
  cfg.backend = metacache::BackendKind::kDiskDir;
  cfg.dir = dir.path();
  TestFile f = small_file();
  ScanResult expected;
  {
    ScanEngine e(MetadataCache::open(cfg), CacheMode::kObjects);
    expected = e.run_query(std::vector<FileHandle>{open(e, f)}, {}, {AggKind::kSum, 0}).result;
  }
  auto cache = MetadataCache::open(cfg);
  ScanEngine e(cache, CacheMode::kObjects);
  auto q = e.run_query(std::vector<FileHandle>{open(e, f)}, {}, {AggKind::kSum, 0});
  EXPECT_EQ(q.result, expected);
  // The footer is fetched by open(), the stripe sections by the query.
  EXPECT_EQ(cache->stats().inflate_count, 0u);
  EXPECT_EQ(cache->stats().hits, 7u);
  EXPECT_EQ(cache->stats().misses, 0u);
}

TEST(OpenFile, PathIdentityTracksFileChanges) {
  TempDir dir;
  const fs::path path = dir.path() / "t.ocf";
  auto write = [&](int64_t n) {
    std::vector<Row> rows;
    for (int64_t i = 0; i < n; ++i) rows.push_back({i});
    auto bytes = colfile::write_file({{"a", ColumnType::kInt64}}, rows, {}).bytes;
    std::ofstream(path, std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  };
  write(10);
  ScanEngine e(cache_for(CacheMode::kObjects), CacheMode::kObjects);
  FileHandle a = e.open_file(path);
  EXPECT_EQ(a.identity(), fs::absolute(path).lexically_normal().string());
  write(20000);
  FileHandle b = e.open_file(path);
  EXPECT_NE(a.file_id(), b.file_id());
  EXPECT_EQ(b.footer().num_rows(), 20000u);
}

TEST(CorruptFile, BadFooterSurfacesAsError) {
  TestFile f = small_file();
  Bytes bytes = f.reader->read_range(0, f.reader->size());
  const auto loc = f.reader->footer_location();
  bytes[loc.offset] ^= 0xFF;
  auto reader = colfile::FileReader::from_bytes(bytes);
  ScanEngine e(nullptr, CacheMode::kNone);
  EXPECT_THROW(e.open_file(reader, "mem://corrupt"), Error);
}

}  // namespace
}  // namespace colcache::scan
