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

// bench: dataset generation and cold/warm metadata-cache benchmarks.
//
//   bench gen    --seed N --files N --stripes N --rows N --cols SPEC --out DIR
//   bench run    --data DIR --workload W1|W2|W3 --mode none|bytes|objects
//                --capacity BYTES --policy fifo|lru|lfu --reps N --csv PATH
//   bench report --csv PATH... [--out PATH]
//   bench stress --data DIR --capacity BYTES --csv PATH
//
// Exit status: 0 ok, 1 report orderings not established, 2 error.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "colcache/bench/generator.h"
#include "colcache/bench/report.h"
#include "colcache/bench/runner.h"
#include "colcache/common/error.h"

namespace {

using namespace colcache;
using namespace colcache::bench;

template <typename T, typename Parse>
T parse_enum(const std::string& s, Parse parse, const char* what) {
  auto v = parse(s);
  if (!v) throw UsageError(std::string("unknown ") + what + " '" + s + "'");
  return *v;
}

int cmd_gen(const GenSpec& spec) {
  Manifest m = generate_dataset(spec);
  uint64_t bytes = 0;
  for (const auto& e : m.entries) bytes += e.size;
  std::printf("wrote %zu files (%llu bytes) to %s\n", m.entries.size(), static_cast<unsigned long long>(bytes),
              spec.out.c_str());
  return 0;
}

int cmd_run(RunConfig config, const std::string& csv) {
  config.workers = workers_from_env(config.workers);
  auto rows = run_benchmark(config);
  append_csv(csv, rows);
  for (const auto& r : rows) std::cout << to_csv(r) << '\n';
  return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<BenchRow> rows;
  for (const auto& path : inputs) {
    auto part = read_csv(path);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  Report report = build_report(rows);
  std::cout << format_report_text(report);
  if (!out.empty()) {
    std::ofstream f(out);
    f << format_report_csv(report);
    if (!f) throw IoError("cannot write " + out);
  }
  return report.all_orderings_hold() ? 0 : 1;
}

int cmd_stress(StressConfig config, const std::string& csv) {
  config.workers = workers_from_env(config.workers);
  StressOutcome out = run_stress(config);
  std::printf("working set %llu bytes, capacity %llu bytes\n",
              static_cast<unsigned long long>(out.working_set_bytes),
              static_cast<unsigned long long>(config.capacity_bytes));
  if (config.capacity_bytes >= out.working_set_bytes) {
    std::printf("note: capacity covers the working set; expect no evictions\n");
  }
  append_csv(csv, out.rows);
  for (size_t i = 0; i < out.rows.size(); ++i) {
    const auto& r = out.rows[i];
    std::printf("%s run %u: hit rate %.3f, evictions %llu, cpu %.3f ms\n", r.phase.c_str(), r.run,
                out.hit_rates[i], static_cast<unsigned long long>(r.stats.evictions), r.cpu_ms);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"colcache benchmark harness"};
  app.require_subcommand(1);

  GenSpec gen;
  std::string gen_cols = "int64x2,float64,utf8";
  std::string gen_out;
  auto* g = app.add_subcommand("gen", "generate a deterministic dataset");
  g->add_option("--seed", gen.seed, "base seed")->default_val(0);
  g->add_option("--files", gen.files, "number of files")->default_val(4)->check(CLI::PositiveNumber);
  g->add_option("--stripes", gen.stripes, "stripes per file")->default_val(4)->check(CLI::PositiveNumber);
  g->add_option("--rows", gen.rows, "rows per stripe")->default_val(4096)->check(CLI::PositiveNumber);
  g->add_option("--cols", gen_cols, "column spec, e.g. int64x2,float64,utf8")->default_val(gen_cols);
  g->add_option("--out", gen_out, "output directory")->required();

  RunConfig run;
  std::string run_workload = "W1", run_mode = "none", run_policy = "lru", run_csv, run_cache_dir;
  auto* r = app.add_subcommand("run", "run a workload cold then warm");
  r->add_option("--data", run.data, "dataset directory")->required();
  r->add_option("--workload", run_workload, "W1, W2 or W3")->default_val(run_workload);
  r->add_option("--mode", run_mode, "none, bytes or objects")->default_val(run_mode);
  r->add_option("--capacity", run.capacity_bytes, "cache capacity in bytes")->default_val(run.capacity_bytes);
  r->add_option("--policy", run_policy, "fifo, lru or lfu")->default_val(run_policy);
  r->add_option("--reps", run.reps, "warm repetitions")->default_val(5)->check(CLI::PositiveNumber);
  r->add_option("--csv", run_csv, "CSV file to append to")->required();
  r->add_option("--cache-dir", run_cache_dir, "use a directory backend under this path");

  std::vector<std::string> report_inputs;
  std::string report_out;
  auto* rep = app.add_subcommand("report", "summarize CSV runs");
  rep->add_option("--csv", report_inputs, "input CSV files")->required()->expected(1, -1);
  rep->add_option("--out", report_out, "write the summary table as CSV here");

  StressConfig stress;
  std::string stress_csv, stress_workload = "W3", stress_mode = "objects", stress_policy = "lru";
  auto* s = app.add_subcommand("stress", "warm passes under a capacity below the working set");
  s->add_option("--data", stress.data, "dataset directory")->required();
  s->add_option("--capacity", stress.capacity_bytes, "cache capacity in bytes")->required();
  s->add_option("--csv", stress_csv, "CSV file to append to")->required();
  s->add_option("--workload", stress_workload, "W1, W2 or W3")->default_val(stress_workload);
  s->add_option("--mode", stress_mode, "bytes or objects")->default_val(stress_mode);
  s->add_option("--policy", stress_policy, "fifo, lru or lfu")->default_val(stress_policy);
  s->add_option("--reps", stress.reps, "warm repetitions")->default_val(5)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*g) {
      gen.columns = parse_column_spec(gen_cols);
      gen.out = gen_out;
      return cmd_gen(gen);
    }
    if (*r) {
      run.workload = parse_enum<WorkloadId>(run_workload, parse_workload, "workload");
      run.mode = parse_enum<scan::CacheMode>(run_mode, scan::parse_cache_mode, "mode");
      run.policy = parse_enum<metacache::EvictionPolicy>(run_policy, metacache::parse_policy, "policy");
      run.cache_dir = run_cache_dir;
      return cmd_run(run, run_csv);
    }
    if (*rep) return cmd_report(report_inputs, report_out);
    if (*s) {
      stress.workload = parse_enum<WorkloadId>(stress_workload, parse_workload, "workload");
      stress.mode = parse_enum<scan::CacheMode>(stress_mode, scan::parse_cache_mode, "mode");
      stress.policy = parse_enum<metacache::EvictionPolicy>(stress_policy, metacache::parse_policy, "policy");
      return cmd_stress(stress, stress_csv);
    }
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
