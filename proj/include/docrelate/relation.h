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

#ifndef DOCRELATE_RELATION_H_
#define DOCRELATE_RELATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace docrelate {

enum class ColumnType { kText, kInteger };
std::string_view column_type_name(ColumnType t);

using Value = std::variant<std::int64_t, std::string>;

inline bool is_text(const Value& v) { return std::holds_alternative<std::string>(v); }
std::string value_to_string(const Value& v);

struct Column {
  std::string name;
  ColumnType type = ColumnType::kText;
  friend bool operator==(const Column&, const Column&) = default;
};

using Row = std::vector<Value>;

struct Relation {
  std::string name;
  std::vector<Column> columns;
  std::vector<Row> rows;

  // Index of the first column with this name.
  std::optional<std::size_t> column_index(std::string_view column) const;
  // Throws SchemaViolation when a row's arity or a cell type disagrees with
  // the column list.
  void validate() const;

  friend bool operator==(const Relation&, const Relation&) = default;
};

}  // namespace docrelate

#endif  // DOCRELATE_RELATION_H_
