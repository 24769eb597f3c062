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
#include <string>
#include <string_view>
#include <vector>

#include "colcache/colfile/types.h"

namespace colcache::scan {

enum class CompareOp : uint8_t { kLt, kLe, kEq, kGe, kGt, kNe };

std::string_view op_symbol(CompareOp op) noexcept;

struct Atom {
  uint32_t column = 0;
  CompareOp op = CompareOp::kEq;
  colfile::Scalar literal;
};

/// Conjunction of atoms. No atoms means always true.
struct Predicate {
  std::vector<Atom> atoms;

  bool always_true() const noexcept { return atoms.empty(); }
  std::string to_string() const;
};

enum class Pushdown : uint8_t { kMustSkip, kMayMatch };

/// Throws SchemaError if an atom names a missing column or its literal does
/// not have the column's type.
void check_predicate(const Predicate& p, std::span<const colfile::ColumnType> types);

/// Row-level evaluation. A null value never satisfies an atom; float
/// comparisons follow IEEE semantics.
bool eval_atom(const Atom& atom, const colfile::ScalarRef& value) noexcept;

/// Stats-level evaluation over a range of `rows` rows. Sound: kMustSkip is
/// returned only when no row in the range can satisfy the atom.
Pushdown eval_pushdown(const Atom& atom, const colfile::StatsRef& stats, uint64_t rows) noexcept;

/// Conjunction form; `stats_for(column)` yields the range's stats.
template <typename StatsFn>
Pushdown eval_pushdown(const Predicate& p, StatsFn&& stats_for, uint64_t rows) {
  for (const auto& atom : p.atoms) {
    if (eval_pushdown(atom, stats_for(atom.column), rows) == Pushdown::kMustSkip) {
      return Pushdown::kMustSkip;
    }
  }
  return Pushdown::kMayMatch;
}

}  // namespace colcache::scan
