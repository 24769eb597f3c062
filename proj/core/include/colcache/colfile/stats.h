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

#include <span>
#include <string_view>

#include "colcache/colfile/types.h"

namespace colcache::colfile {

/// Orders two non-null values of the same column type. Strings compare as
/// unsigned bytes. Returns <0, 0, >0. Not meaningful for NaN.
int compare_scalars(const ScalarRef& a, const ScalarRef& b) noexcept;

/// Accumulates min/max/null_count for one column type. NaN is counted as a
/// non-null value but never becomes min or max.
class StatsBuilder {
 public:
  explicit StatsBuilder(ColumnType type) noexcept : type_(type) {}

  void add_null() noexcept { ++null_count_; }
  void add(int64_t v);
  void add(double v);
  void add(std::string_view v);
  void add(const Cell& c);
  /// Folds already-computed stats of a disjoint row range.
  void merge(const StatsRef& s);

  ColumnStats finish() const;
  ColumnType type() const noexcept { return type_; }

 private:
  void offer(const ScalarRef& v);

  ColumnType type_;
  bool has_minmax_ = false;
  Scalar min_;
  Scalar max_;
  uint64_t null_count_ = 0;
};

ColumnStats compute_stats(ColumnType type, std::span<const Cell> values);

}  // namespace colcache::colfile
