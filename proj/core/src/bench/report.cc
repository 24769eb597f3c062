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

#include "colcache/bench/report.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "colcache/common/error.h"

namespace colcache::bench {

using scan::CacheMode;

namespace {

constexpr CacheMode kModes[] = {CacheMode::kNone, CacheMode::kBytes, CacheMode::kObjects};

std::optional<double> relative(double value, double base) {
  if (base == 0) return std::nullopt;
  return (value - base) / base * 100.0;
}

std::string percent(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.1f%%", *v);
  return buf;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

bool Report::all_orderings_hold() const noexcept {
  return std::all_of(scenarios.begin(), scenarios.end(),
                     [](const ScenarioSummary& s) { return s.cold_order_holds && s.warm_order_holds; });
}

double median(std::vector<double> values) {
  if (values.empty()) return 0;
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2;
}

std::vector<BenchRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ReportError("cannot read " + path.string());
  std::vector<BenchRow> rows;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.rfind("scenario,", 0) == 0) continue;
    try {
      rows.push_back(parse_csv_row(line));
    } catch (const ReportError& e) {
      throw ReportError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

Report build_report(std::span<const BenchRow> rows) {
  if (rows.empty()) throw ReportError("no rows");
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (std::find(order.begin(), order.end(), r.scenario) == order.end()) order.push_back(r.scenario);
  }

  Report report;
  std::vector<std::string> gaps;
  for (const auto& name : order) {
    ScenarioSummary s;
    s.scenario = name;
    for (CacheMode mode : kModes) {
      std::vector<double> cold, warm, inflate, deser, enc, dec;
      for (const auto& r : rows) {
        if (r.scenario != name || r.mode != mode) continue;
        if (r.phase == "cold") {
          cold.push_back(r.cpu_ms);
        } else {
          warm.push_back(r.cpu_ms);
          inflate.push_back(static_cast<double>(r.stats.inflate_count));
          deser.push_back(static_cast<double>(r.stats.deserialize_count));
          enc.push_back(static_cast<double>(r.stats.encode_count));
          dec.push_back(static_cast<double>(r.stats.decode_count));
        }
      }
      const std::string where = name + "/" + std::string(scan::cache_mode_name(mode));
      if (cold.empty()) gaps.push_back(where + "/cold");
      if (warm.empty()) gaps.push_back(where + "/warm");
      s.modes[mode] = {median(cold), median(warm), median(inflate), median(deser), median(enc), median(dec)};
    }
    const auto& none = s.modes[CacheMode::kNone];
    const auto& bytes = s.modes[CacheMode::kBytes];
    const auto& objects = s.modes[CacheMode::kObjects];
    s.cold_overhead_bytes = relative(bytes.cold_cpu_ms, none.cold_cpu_ms);
    s.cold_overhead_objects = relative(objects.cold_cpu_ms, none.cold_cpu_ms);
    if (auto r = relative(bytes.warm_cpu_ms, none.warm_cpu_ms)) s.warm_reduction_bytes = -*r;
    if (auto r = relative(objects.warm_cpu_ms, none.warm_cpu_ms)) s.warm_reduction_objects = -*r;
    s.cold_order_holds = none.cold_cpu_ms < bytes.cold_cpu_ms && bytes.cold_cpu_ms < objects.cold_cpu_ms;
    s.warm_order_holds = objects.warm_cpu_ms < bytes.warm_cpu_ms && bytes.warm_cpu_ms < none.warm_cpu_ms;
    report.scenarios.push_back(std::move(s));
  }
  if (!gaps.empty()) {
    std::string msg = "missing rows for";
    for (const auto& g : gaps) msg += " " + g;
    throw ReportError(msg);
  }
  return report;
}

std::string format_report_text(const Report& report) {
  std::ostringstream os;
  for (const auto& s : report.scenarios) {
    os << "scenario " << s.scenario << "\n";
    os << "  mode      cold_ms     warm_ms     warm inflate/deser/encode/decode\n";
    for (CacheMode mode : kModes) {
      const auto& m = s.modes.at(mode);
      char line[160];
      std::snprintf(line, sizeof line, "  %-8s %10.3f  %10.3f     %g/%g/%g/%g\n",
                    std::string(scan::cache_mode_name(mode)).c_str(), m.cold_cpu_ms, m.warm_cpu_ms, m.warm_inflate,
                    m.warm_deserialize, m.warm_encode, m.warm_decode);
      os << line;
    }
    os << "  cold overhead vs none: bytes " << percent(s.cold_overhead_bytes) << ", objects "
       << percent(s.cold_overhead_objects) << "\n";
    os << "  warm reduction vs none: bytes " << percent(s.warm_reduction_bytes) << ", objects "
       << percent(s.warm_reduction_objects) << "\n";
    os << "  cold ordering none < bytes < objects: " << (s.cold_order_holds ? "holds" : "not established") << "\n";
    os << "  warm ordering objects < bytes < none: " << (s.warm_order_holds ? "holds" : "not established") << "\n";
  }
  return os.str();
}

std::string format_report_csv(const Report& report) {
  std::ostringstream os;
  os << "scenario,mode,cold_cpu_ms,warm_cpu_ms,cold_overhead_pct,warm_reduction_pct,warm_inflate,"
        "warm_deserialize,warm_encode,warm_decode,cold_order,warm_order\n";
  for (const auto& s : report.scenarios) {
    for (CacheMode mode : kModes) {
      const auto& m = s.modes.at(mode);
      std::optional<double> overhead, reduction;
      if (mode == CacheMode::kNone) {
        overhead = reduction = 0.0;
      } else if (mode == CacheMode::kBytes) {
        overhead = s.cold_overhead_bytes;
        reduction = s.warm_reduction_bytes;
      } else {
        overhead = s.cold_overhead_objects;
        reduction = s.warm_reduction_objects;
      }
      os << s.scenario << ',' << scan::cache_mode_name(mode) << ',' << number(m.cold_cpu_ms) << ','
         << number(m.warm_cpu_ms) << ',' << (overhead ? number(*overhead) : "") << ','
         << (reduction ? number(*reduction) : "") << ',' << m.warm_inflate << ',' << m.warm_deserialize << ','
         << m.warm_encode << ',' << m.warm_decode << ',' << (s.cold_order_holds ? "holds" : "not established") << ','
         << (s.warm_order_holds ? "holds" : "not established") << '\n';
    }
  }
  return os.str();
}

}  // namespace colcache::bench
