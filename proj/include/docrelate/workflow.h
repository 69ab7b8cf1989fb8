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

#ifndef DOCRELATE_WORKFLOW_H_
#define DOCRELATE_WORKFLOW_H_

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "docrelate/relation.h"
#include "docrelate/relation_store.h"
#include "docrelate/template_registry.h"

namespace docrelate {

struct WorkflowStep {
  std::string utterance;  // empty for steps issued as raw SQL
  std::string sql;
  friend bool operator==(const WorkflowStep&, const WorkflowStep&) = default;
};

struct Workflow {
  std::string name;
  std::string template_id;  // kUnknownTemplate when the document matched none
  std::vector<WorkflowStep> steps;
  friend bool operator==(const Workflow&, const Workflow&) = default;
};

// Steps of the current session in execution order.
class Recording {
 public:
  void record_step(std::string utterance, std::string sql);
  void clear() { steps_.clear(); }
  const std::vector<WorkflowStep>& steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }
  std::size_t size() const { return steps_.size(); }

 private:
  std::vector<WorkflowStep> steps_;
};

// name, template id, then one `STEP<TAB>utterance<TAB>sql` line per step
// with tabs, newlines and backslashes escaped.
std::string serialize_workflow(const Workflow& wf);
Workflow parse_workflow(std::string_view text);

// Saved workflows, optionally mirrored to <dir>/<name>.wf. Thread-safe.
class WorkflowRegistry {
 public:
  WorkflowRegistry() = default;
  explicit WorkflowRegistry(std::filesystem::path dir);

  // Throws EmptyRecording, DuplicateName or MalformedInput (bad name).
  Workflow save(const std::string& name, const std::string& template_id,
                const Recording& recording);
  // Throws UnknownWorkflow.
  Workflow get(std::string_view name) const;
  bool contains(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mu_;
  std::map<std::string, Workflow, std::less<>> workflows_;
};

struct StepResult {
  std::string utterance;
  std::string sql;  // as executed, after re-grounding
  std::optional<Relation> relation;
  bool empty = false;
  std::optional<std::string> error;
};

struct ApplyResult {
  std::string workflow;
  std::vector<StepResult> steps;
  std::vector<std::string> warnings;
  std::optional<TemplateMatch> template_match;
};

// Rewrites string literals of a recorded query for a new document: a
// literal that names an untyped anchor word which the new document spells
// differently (case or punctuation) takes the new spelling. Everything else
// is kept verbatim.
std::string reground_sql(std::string_view sql, const RelationDB& target);

// Replays the compiled SQL in order on a private copy of `target`, chaining
// through TEMP. Steps recorded from utterances are re-grounded first; raw
// SQL steps run verbatim. Empty results and failing steps are flagged and
// replay goes on. When `templates` is given, a target scoring below `threshold` against
// the workflow's template adds a TemplateMismatchWarning.
ApplyResult apply_workflow(const Workflow& wf, const RelationDB& target,
                           const TemplateRegistry* templates = nullptr,
                           double threshold = 0.6);

}  // namespace docrelate

#endif  // DOCRELATE_WORKFLOW_H_
