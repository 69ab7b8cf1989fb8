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

#ifndef DOCRELATE_TESTS_FIXTURES_H_
#define DOCRELATE_TESTS_FIXTURES_H_

#include <filesystem>
#include <string>

#include "docrelate/config.h"
#include "docrelate/entities.h"
#include "docrelate/lexicon.h"
#include "docrelate/relation_store.h"

namespace docrelate::testing {

std::filesystem::path data_dir();      // tests/data
std::filesystem::path lexicon_dir();   // data/lexicons
std::string read_text(const std::filesystem::path& p);

const Lexicons& demo_lexicons();

// "bank_a" (with its raster), "bank_b" or "invoice_c".
RawDocument fixture_raw(const std::string& name);
DocumentEntities fixture_entities(const std::string& name);
RelationDB fixture_db(const std::string& name);

// Cell lookup helpers for assertions.
const Value& cell(const Relation& r, std::size_t row, std::string_view column);
std::string text_cell(const Relation& r, std::size_t row, std::string_view column);
std::int64_t int_cell(const Relation& r, std::size_t row, std::string_view column);

// Fresh temporary directory under the system temp path.
std::filesystem::path temp_dir(const std::string& tag);

}  // namespace docrelate::testing

#endif  // DOCRELATE_TESTS_FIXTURES_H_
