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

#include "colcache/scan/predicate.h"

#include <sstream>

#include "colcache/colfile/stats.h"
#include "colcache/common/error.h"

namespace colcache::scan {

using colfile::ScalarRef;
using colfile::StatsRef;

std::string_view op_symbol(CompareOp op) noexcept {
  switch (op) {
    case CompareOp::kLt: return "<";
    case CompareOp::kLe: return "<=";
    case CompareOp::kEq: return "=";
    case CompareOp::kGe: return ">=";
    case CompareOp::kGt: return ">";
    case CompareOp::kNe: return "!=";
  }
  return "?";
}

std::string Predicate::to_string() const {
  if (atoms.empty()) return "true";
  std::ostringstream os;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0) os << " AND ";
    os << "c" << atoms[i].column << ' ' << op_symbol(atoms[i].op) << ' ';
    std::visit(
        [&os](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::monostate>) {
            os << "NULL";
          } else if constexpr (std::is_same_v<T, std::string>) {
            os << '\'' << v << '\'';
          } else {
            os << v;
          }
        },
        atoms[i].literal);
  }
  return os.str();
}

void check_predicate(const Predicate& p, std::span<const colfile::ColumnType> types) {
  for (const auto& a : p.atoms) {
    if (a.column >= types.size()) {
      throw SchemaError("predicate references column " + std::to_string(a.column) + " of " +
                        std::to_string(types.size()));
    }
    if (!colfile::scalar_matches_type(a.literal, types[a.column])) {
      throw SchemaError("predicate literal for column " + std::to_string(a.column) + " is not " +
                        std::string(colfile::column_type_name(types[a.column])));
    }
  }
}

namespace {

template <typename T>
bool apply(CompareOp op, const T& v, const T& lit) noexcept {
  switch (op) {
    case CompareOp::kLt: return v < lit;
    case CompareOp::kLe: return v <= lit;
    case CompareOp::kEq: return v == lit;
    case CompareOp::kGe: return v >= lit;
    case CompareOp::kGt: return v > lit;
    case CompareOp::kNe: return v != lit;
  }
  return false;
}

}  // namespace

bool eval_atom(const Atom& atom, const ScalarRef& value) noexcept {
  if (auto* v = std::get_if<int64_t>(&value)) {
    auto* lit = std::get_if<int64_t>(&atom.literal);
    return lit && apply(atom.op, *v, *lit);
  }
  if (auto* v = std::get_if<double>(&value)) {
    auto* lit = std::get_if<double>(&atom.literal);
    return lit && apply(atom.op, *v, *lit);
  }
  if (auto* v = std::get_if<std::string_view>(&value)) {
    auto* lit = std::get_if<std::string>(&atom.literal);
    return lit && apply(atom.op, *v, std::string_view(*lit));
  }
  return false;
}

namespace {

// Ordered comparisons with IEEE semantics for doubles (false when either
// side is NaN).
bool greater(const ScalarRef& a, const ScalarRef& b) noexcept {
  if (auto* x = std::get_if<double>(&a)) return *x > std::get<double>(b);
  return colfile::compare_scalars(a, b) > 0;
}

bool greater_equal(const ScalarRef& a, const ScalarRef& b) noexcept {
  if (auto* x = std::get_if<double>(&a)) return *x >= std::get<double>(b);
  return colfile::compare_scalars(a, b) >= 0;
}

}  // namespace

Pushdown eval_pushdown(const Atom& atom, const StatsRef& s, uint64_t rows) noexcept {
  if (s.null_count >= rows) return Pushdown::kMustSkip;
  if (!s.has_minmax) return Pushdown::kMayMatch;
  ScalarRef lit = colfile::as_ref(atom.literal);
  if (lit.index() != s.min.index()) return Pushdown::kMayMatch;

  bool skip = false;
  switch (atom.op) {
    case CompareOp::kLt: skip = greater_equal(s.min, lit); break;
    case CompareOp::kLe: skip = greater(s.min, lit); break;
    case CompareOp::kEq: skip = greater(s.min, lit) || greater(lit, s.max); break;
    case CompareOp::kGe: skip = greater(lit, s.max); break;
    case CompareOp::kGt: skip = greater_equal(lit, s.max); break;
    // Min/max cannot rule out inequality.
    case CompareOp::kNe: skip = false; break;
  }
  return skip ? Pushdown::kMustSkip : Pushdown::kMayMatch;
}

}  // namespace colcache::scan
