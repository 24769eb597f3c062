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

#include "colcache/bench/workload.h"

#include "colcache/common/error.h"

namespace colcache::bench {

using colfile::ColumnType;
using scan::AggKind;
using scan::CompareOp;

std::string_view workload_name(WorkloadId w) noexcept {
  switch (w) {
    case WorkloadId::kW1: return "W1";
    case WorkloadId::kW2: return "W2";
    case WorkloadId::kW3: return "W3";
  }
  return "?";
}

std::optional<WorkloadId> parse_workload(std::string_view s) noexcept {
  if (s == "W1" || s == "w1") return WorkloadId::kW1;
  if (s == "W2" || s == "w2") return WorkloadId::kW2;
  if (s == "W3" || s == "w3") return WorkloadId::kW3;
  return std::nullopt;
}

Workload make_workload(WorkloadId id, std::span<const ColumnType> types) {
  uint32_t col = 0;
  while (col < types.size() && types[col] == ColumnType::kUtf8) ++col;
  if (col == types.size()) throw UsageError("workloads need a numeric column");
  const bool is_float = types[col] == ColumnType::kFloat64;
  auto literal = [is_float](int64_t v) -> colfile::Scalar {
    if (is_float) return static_cast<double>(v) / 1e6;
    return v;
  };

  Workload w;
  switch (id) {
    case WorkloadId::kW1:
      w.predicate.atoms = {{col, CompareOp::kLt, literal(100'000)}};
      w.aggregate = {AggKind::kCount, 0};
      break;
    case WorkloadId::kW2:
      w.predicate.atoms = {{col, CompareOp::kGe, literal(250'000)}, {col, CompareOp::kLt, literal(750'000)}};
      w.aggregate = {AggKind::kSum, col};
      break;
    case WorkloadId::kW3: w.aggregate = {AggKind::kSum, col}; break;
  }
  return w;
}

}  // namespace colcache::bench
