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

#include "colcache/colfile/stats.h"

#include <cmath>

#include "colcache/common/error.h"

namespace colcache::colfile {

std::optional<ColumnType> column_type_from_code(uint8_t code) noexcept {
  switch (code) {
    case 0: return ColumnType::kInt64;
    case 1: return ColumnType::kFloat64;
    case 2: return ColumnType::kUtf8;
    default: return std::nullopt;
  }
}

std::string_view column_type_name(ColumnType t) noexcept {
  switch (t) {
    case ColumnType::kInt64: return "int64";
    case ColumnType::kFloat64: return "float64";
    case ColumnType::kUtf8: return "utf8";
  }
  return "?";
}

ScalarRef as_ref(const Scalar& s) noexcept {
  return std::visit(
      [](const auto& v) -> ScalarRef {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return std::string_view(v);
        } else {
          return v;
        }
      },
      s);
}

Scalar to_owned(const ScalarRef& s) {
  return std::visit(
      [](const auto& v) -> Scalar {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string_view>) {
          return std::string(v);
        } else {
          return v;
        }
      },
      s);
}

bool scalar_matches_type(const Scalar& s, ColumnType t) noexcept {
  switch (t) {
    case ColumnType::kInt64: return std::holds_alternative<int64_t>(s);
    case ColumnType::kFloat64: return std::holds_alternative<double>(s);
    case ColumnType::kUtf8: return std::holds_alternative<std::string>(s);
  }
  return false;
}

std::vector<ColumnType> FileFooter::column_types() const {
  std::vector<ColumnType> out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(c.type);
  return out;
}

int compare_scalars(const ScalarRef& a, const ScalarRef& b) noexcept {
  if (auto* x = std::get_if<int64_t>(&a)) {
    int64_t y = std::get<int64_t>(b);
    return *x < y ? -1 : (*x > y ? 1 : 0);
  }
  if (auto* x = std::get_if<double>(&a)) {
    double y = std::get<double>(b);
    return *x < y ? -1 : (*x > y ? 1 : 0);
  }
  if (auto* x = std::get_if<std::string_view>(&a)) {
    // string_view::compare uses char_traits<char>, which compares as
    // unsigned char.
    int c = x->compare(std::get<std::string_view>(b));
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  return 0;
}

void StatsBuilder::add(int64_t v) {
  if (type_ != ColumnType::kInt64) throw SchemaError("int64 value in non-int64 column");
  offer(v);
}

void StatsBuilder::add(double v) {
  if (type_ != ColumnType::kFloat64) throw SchemaError("float64 value in non-float64 column");
  if (std::isnan(v)) return;
  offer(v);
}

void StatsBuilder::add(std::string_view v) {
  if (type_ != ColumnType::kUtf8) throw SchemaError("utf8 value in non-utf8 column");
  offer(v);
}

void StatsBuilder::add(const Cell& c) {
  std::visit(
      [this](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          add_null();
        } else if constexpr (std::is_same_v<T, std::string>) {
          add(std::string_view(v));
        } else {
          add(v);
        }
      },
      c);
}

void StatsBuilder::merge(const StatsRef& s) {
  null_count_ += s.null_count;
  if (!s.has_minmax) return;
  offer(s.min);
  offer(s.max);
}

void StatsBuilder::offer(const ScalarRef& v) {
  if (!has_minmax_) {
    min_ = to_owned(v);
    max_ = min_;
    has_minmax_ = true;
    return;
  }
  if (compare_scalars(v, as_ref(min_)) < 0) min_ = to_owned(v);
  if (compare_scalars(v, as_ref(max_)) > 0) max_ = to_owned(v);
}

ColumnStats StatsBuilder::finish() const {
  ColumnStats s;
  s.has_minmax = has_minmax_;
  s.null_count = null_count_;
  if (has_minmax_) {
    s.min = min_;
    s.max = max_;
  }
  return s;
}

ColumnStats compute_stats(ColumnType type, std::span<const Cell> values) {
  StatsBuilder b(type);
  for (const auto& c : values) b.add(c);
  return b.finish();
}

}  // namespace colcache::colfile
