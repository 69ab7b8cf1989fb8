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

#include "doctest.h"
#include "properties.h"

using namespace docrelate::testing;

namespace {

void require_clean(const PropertyReport& r) {
  INFO(r.name << ": " << r.first_failure);
  CHECK(r.cases >= 200);
  CHECK(r.failures == 0);
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("erosion never adds ink") { require_clean(check_erosion(300, 11)); }
  TEST_CASE("components partition the ink") { require_clean(check_components(300, 12)); }
  TEST_CASE("lines and blocks partition the page") {
    require_clean(check_lines_and_blocks(300, 13));
  }
  TEST_CASE("adjacency matches the brute-force nearest neighbor") {
    require_clean(check_adjacency(300, 14));
  }
  TEST_CASE("printed queries reparse to the same AST") {
    require_clean(check_ast_round_trip(500, 15));
  }
  TEST_CASE("populate is deterministic") { require_clean(check_populate_determinism(200, 16)); }
  TEST_CASE("replay is deterministic and matches authoring") {
    require_clean(check_replay_determinism(200, 17));
  }
  TEST_CASE("query engine agrees with the reference evaluator, errors included") {
    require_clean(check_query_differential(40, 25, 0.2, 18));
  }
}
