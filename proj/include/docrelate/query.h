// Copyright 2026 The docrelate Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DOCRELATE_QUERY_H_
#define DOCRELATE_QUERY_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "docrelate/relation.h"
#include "docrelate/relation_store.h"

namespace docrelate {

// Grammar (keywords are case-insensitive):
//
//   query        := SELECT select_list FROM ident [WHERE cond] [';']
//   select_list  := '*' | ident (',' ident)* | substr_call
//   substr_call  := SUBSTR '(' ident ',' posexpr [',' length] ')'
//   posexpr      := POS '(' string ')' [('+'|'-') integer]
//   length       := posexpr | POS '(' string ')' '-' POS '(' string ')'
//   cond         := ident '=' literal | ident '=' '(' query ')'
//   literal      := string | ['-'] integer
//
// Strings are double-quoted; \" and \\ are the only escapes.
//
// SUBSTR follows SQLite clamping (a start below 1 shortens the length, a
// non-positive length yields "") and trims surrounding whitespace from the
// result. Rows where any pos() needle is missing are dropped.

// pos("V"): 1-based character index just past the first occurrence of V,
// shifted by offset.
struct PosExpr {
  std::string value;
  std::int64_t offset = 0;
  friend bool operator==(const PosExpr&, const PosExpr&) = default;
};

// Either a plain position or the difference pos(end) - pos(start).
struct SubstrLength {
  PosExpr end;
  std::optional<std::string> minus;
  friend bool operator==(const SubstrLength&, const SubstrLength&) = default;
};

struct SubstrCall {
  std::string column;
  PosExpr start;
  std::optional<SubstrLength> length;
  friend bool operator==(const SubstrCall&, const SubstrCall&) = default;
};

struct Star {
  friend bool operator==(const Star&, const Star&) = default;
};

struct Query;

struct Condition {
  std::string column;
  // A literal for equality, or a single-column subquery for membership.
  std::variant<Value, std::shared_ptr<const Query>> rhs;

  bool is_subquery() const { return rhs.index() == 1; }
  const Query& subquery() const { return *std::get<1>(rhs); }
  const Value& literal() const { return std::get<0>(rhs); }
};

struct Query {
  std::variant<Star, std::vector<std::string>, SubstrCall> select;
  std::string table;
  std::optional<Condition> where;

  bool is_substr() const { return select.index() == 2; }
};

bool operator==(const Condition& a, const Condition& b);
bool operator==(const Query& a, const Query& b);

// Throws ParseError carrying the 1-based token index and expected tokens.
Query parse_sql(std::string_view text);

// Canonical text; parse_sql(to_sql(q)) == q.
std::string to_sql(const Query& query);
std::string quote_string(std::string_view s);

struct TracedResult {
  Relation relation;
  // For each output row, the index of the FROM-table row it came from.
  std::vector<std::size_t> source_rows;
};

TracedResult evaluate_traced(const Query& query, const RelationDB& db);
Relation evaluate(const Query& query, const RelationDB& db);

// parse -> evaluate -> stage as TEMP. TEMP is untouched when any stage
// throws.
Relation execute_and_stage(std::string_view text, RelationDB& db);

// Helpers shared with the NL layer.
std::optional<std::int64_t> pos_of(std::string_view haystack, std::string_view needle);
std::string substr_chars(std::string_view s, std::int64_t start,
                         std::optional<std::int64_t> length);

}  // namespace docrelate

#endif  // DOCRELATE_QUERY_H_
