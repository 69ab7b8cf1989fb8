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

#ifndef DOCRELATE_RELATION_STORE_H_
#define DOCRELATE_RELATION_STORE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docrelate/entities.h"
#include "docrelate/ingest.h"
#include "docrelate/relation.h"

namespace docrelate {

inline constexpr std::string_view kTempTable = "TEMP";

// Names of the base relations, in schema order.
const std::vector<std::string>& base_relation_names();
// Fixed column layout of a base relation; throws UnknownTable otherwise.
const std::vector<Column>& base_relation_schema(std::string_view name);

// Relations describing one document plus the session's TEMP slot. Base
// relations are immutable and shared between copies, so copying a database
// to give a new session its own TEMP is cheap.
class RelationDB {
 public:
  RelationDB() = default;
  RelationDB(std::string doc_id, PageSize page_size,
             std::map<std::string, Relation, std::less<>> base);

  const std::string& doc_id() const { return base_->doc_id; }
  PageSize page_size() const { return base_->page_size; }

  // "TEMP" resolves to the staged relation; throws UnknownTable otherwise.
  const Relation& get_table(std::string_view name) const;
  bool has_table(std::string_view name) const;

  void stage_temp(Relation r);
  void clear_temp() { temp_.reset(); }
  const std::optional<Relation>& temp() const { return temp_; }

  const std::map<std::string, Relation, std::less<>>& base_relations() const {
    return base_->relations;
  }

 private:
  struct Base {
    std::string doc_id;
    PageSize page_size;
    std::map<std::string, Relation, std::less<>> relations;
  };

  std::shared_ptr<const Base> base_ = std::make_shared<const Base>();
  std::optional<Relation> temp_;
};

// Builds every base relation from the derived entities. Absent ids are
// stored as -1 and absent texts as "null". Rows are stably sorted by the
// first integer column.
RelationDB populate(const DocumentEntities& entities);

// Writes <dir>/<relation>.tsv for every base relation plus <dir>/meta.json.
void dump_db(const RelationDB& db, const std::filesystem::path& dir);
RelationDB load_db(const std::filesystem::path& dir);

std::string relation_to_tsv(const Relation& r, bool header = true);

}  // namespace docrelate

#endif  // DOCRELATE_RELATION_STORE_H_
