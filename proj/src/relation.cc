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

#include "docrelate/relation.h"

#include "docrelate/error.h"

namespace docrelate {

std::string_view column_type_name(ColumnType t) {
  return t == ColumnType::kText ? "text" : "integer";
}

std::string value_to_string(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return std::to_string(std::get<std::int64_t>(v));
}

std::optional<std::size_t> Relation::column_index(std::string_view column) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == column) return i;
  }
  return std::nullopt;
}

void Relation::validate() const {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != columns.size()) {
      throw Error(ErrorCode::kSchemaViolation,
                  name + ": row " + std::to_string(r) + " has arity " +
                      std::to_string(rows[r].size()) + ", expected " +
                      std::to_string(columns.size()));
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (is_text(rows[r][c]) != (columns[c].type == ColumnType::kText)) {
        throw Error(ErrorCode::kSchemaViolation,
                    name + ": cell (" + std::to_string(r) + ", " + columns[c].name +
                        ") does not match column type");
      }
    }
  }
}

}  // namespace docrelate
