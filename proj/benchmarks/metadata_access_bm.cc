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

// Metadata path microbenchmarks: warm and cold section loads per cache mode,
// plus the codec steps each mode pays for.

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "colcache/bench/generator.h"
#include "colcache/colfile/compression.h"
#include "colcache/colfile/metadata_codec.h"
#include "colcache/colfile/reader.h"
#include "colcache/metacache/object_buffer.h"
#include "colcache/scan/engine.h"

namespace {

using colcache::Bytes;
using colcache::bench::GenSpec;
using colcache::colfile::FileReader;
using colcache::metacache::CacheConfig;
using colcache::metacache::MetadataCache;
using colcache::scan::CacheMode;
using colcache::scan::FileHandle;
using colcache::scan::ScanEngine;

struct Dataset {
  std::vector<std::shared_ptr<const FileReader>> readers;
  uint32_t stripes = 0;
};

const Dataset& dataset() {
  static const Dataset ds = [] {
    GenSpec spec;
    spec.seed = 11;
    spec.files = 32;
    spec.stripes = 4;
    spec.rows = 2048;
    spec.columns = colcache::bench::parse_column_spec("int64x4,float64x2,utf8x2");
    Dataset d;
    d.stripes = spec.stripes;
    for (uint32_t i = 0; i < spec.files; ++i) {
      d.readers.push_back(FileReader::from_bytes(colcache::bench::generate_file(spec, i)));
    }
    return d;
  }();
  return ds;
}

std::shared_ptr<MetadataCache> cache_for(CacheMode mode) {
  if (mode == CacheMode::kNone) return nullptr;
  return MetadataCache::open(CacheConfig{});
}

void load_all(const ScanEngine& e, const Dataset& ds) {
  for (size_t i = 0; i < ds.readers.size(); ++i) {
    FileHandle h = e.open_file(ds.readers[i], "mem://bm/" + std::to_string(i));
    benchmark::DoNotOptimize(h.footer().num_rows());
    for (uint32_t s = 0; s < ds.stripes; ++s) {
      auto m = e.load_stripe_metadata(h, s);
      benchmark::DoNotOptimize(m.num_row_groups());
    }
  }
}

void BM_WarmMetadataAccess(benchmark::State& state) {
  const auto mode = static_cast<CacheMode>(state.range(0));
  const Dataset& ds = dataset();
  ScanEngine e(cache_for(mode), mode);
  load_all(e, ds);
  for (auto _ : state) load_all(e, ds);
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(ds.readers.size() * (1 + ds.stripes)));
  state.SetLabel(std::string(colcache::scan::cache_mode_name(mode)));
}
BENCHMARK(BM_WarmMetadataAccess)->DenseRange(0, 2)->MeasureProcessCPUTime();

void BM_ColdMetadataAccess(benchmark::State& state) {
  const auto mode = static_cast<CacheMode>(state.range(0));
  const Dataset& ds = dataset();
  for (auto _ : state) {
    state.PauseTiming();
    auto engine = std::make_unique<ScanEngine>(cache_for(mode), mode);
    state.ResumeTiming();
    load_all(*engine, ds);
    state.PauseTiming();
    engine.reset();
    state.ResumeTiming();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(ds.readers.size() * (1 + ds.stripes)));
  state.SetLabel(std::string(colcache::scan::cache_mode_name(mode)));
}
BENCHMARK(BM_ColdMetadataAccess)->DenseRange(0, 2)->MeasureProcessCPUTime();

void BM_FooterInflate(benchmark::State& state) {
  const Bytes compressed = dataset().readers[0]->read_footer_compressed();
  for (auto _ : state) benchmark::DoNotOptimize(colcache::colfile::inflate_section(compressed));
}
BENCHMARK(BM_FooterInflate);

void BM_FooterParse(benchmark::State& state) {
  const Bytes raw = colcache::colfile::serialize_footer(colcache::colfile::read_footer(*dataset().readers[0]));
  for (auto _ : state) benchmark::DoNotOptimize(colcache::colfile::parse_footer(raw));
}
BENCHMARK(BM_FooterParse);

void BM_FooterEncode(benchmark::State& state) {
  const auto footer = colcache::colfile::read_footer(*dataset().readers[0]);
  for (auto _ : state) benchmark::DoNotOptimize(colcache::metacache::encode_footer_buf(footer));
}
BENCHMARK(BM_FooterEncode);

void BM_FooterDecode(benchmark::State& state) {
  const Bytes buf = colcache::metacache::encode_footer_buf(colcache::colfile::read_footer(*dataset().readers[0]));
  for (auto _ : state) {
    auto view = colcache::metacache::decode_footer_view(buf);
    benchmark::DoNotOptimize(view.num_rows());
  }
}
BENCHMARK(BM_FooterDecode);

}  // namespace

BENCHMARK_MAIN();
