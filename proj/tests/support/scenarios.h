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

#ifndef DOCRELATE_TESTS_SCENARIOS_H_
#define DOCRELATE_TESTS_SCENARIOS_H_

// End-to-end scenarios shared by the unit tests and the acceptance runner.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "docrelate/relation_store.h"
#include "docrelate/workflow.h"

namespace docrelate::testing {

// Runs ingest -> entities -> populate on a word list.
RelationDB db_from_words(const std::string& doc_id, const std::vector<Word>& words);

// The three-step account extraction authored on bank_a through the engine,
// saved, then applied to bank_b and invoice_c.
struct AccountScenario {
  std::vector<std::string> authored_sql;
  std::optional<std::string> value_a;
  std::optional<std::string> value_b;
  Workflow workflow;
  ApplyResult on_b;
  ApplyResult on_c;
  std::string crash;  // what() of an unexpected exception, else empty
};
AccountScenario run_account_scenario();

// Nine synthetic form templates, each registered from its reference layout
// and matched against `instances` jittered renders.
struct TemplateScenario {
  int correct = 0;
  int total = 0;
  double min_true_score = 1.0;
  double max_false_score = 0.0;
  std::vector<std::string> misses;
};
TemplateScenario run_template_scenario(std::uint64_t seed, int instances, int jitter,
                                       double threshold);

}  // namespace docrelate::testing

#endif  // DOCRELATE_TESTS_SCENARIOS_H_
