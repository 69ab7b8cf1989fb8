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

#include "docrelate/workflow.h"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

#include "docrelate/entities.h"
#include "docrelate/error.h"
#include "docrelate/nl.h"
#include "docrelate/query.h"
#include "docrelate/text_util.h"

namespace docrelate {

namespace {

std::string regrounded(const std::string& value, const Relation& table,
                       std::string_view column, bool substring) {
  if (classify_token(value) != DataType::kNone) return value;
  return substring ? ground_substring(value, table, column)
                   : ground_value(value, table, column);
}

// Returns true when anything changed.
bool reground_query(Query& q, const RelationDB& db) {
  if (!db.has_table(q.table)) return false;
  const Relation& table = db.get_table(q.table);
  bool changed = false;
  if (q.where) {
    if (q.where->is_subquery()) {
      Query inner = q.where->subquery();
      if (reground_query(inner, db)) {
        q.where->rhs = std::make_shared<const Query>(std::move(inner));
        changed = true;
      }
    } else if (is_text(q.where->literal())) {
      const std::string& v = std::get<std::string>(q.where->literal());
      std::string g = regrounded(v, table, q.where->column, false);
      if (g != v) {
        q.where->rhs = Value{std::move(g)};
        changed = true;
      }
    }
  }
  if (auto* call = std::get_if<SubstrCall>(&q.select)) {
    auto fix = [&](std::string& v) {
      std::string g = regrounded(v, table, call->column, true);
      if (g != v) {
        v = std::move(g);
        changed = true;
      }
    };
    fix(call->start.value);
    if (call->length) {
      fix(call->length->end.value);
      if (call->length->minus) fix(*call->length->minus);
    }
  }
  return changed;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void Recording::record_step(std::string utterance, std::string sql) {
  steps_.push_back(WorkflowStep{std::move(utterance), std::move(sql)});
}

std::string serialize_workflow(const Workflow& wf) {
  std::string out = escape_field(wf.name) + "\n" + escape_field(wf.template_id) + "\n";
  for (const WorkflowStep& s : wf.steps) {
    out += "STEP\t" + escape_field(s.utterance) + "\t" + escape_field(s.sql) + "\n";
  }
  return out;
}

Workflow parse_workflow(std::string_view text) {
  std::istringstream in{std::string(text)};
  Workflow wf;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kMalformedInput, "workflow file is empty");
  wf.name = unescape_field(line);
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kMalformedInput, "workflow file lacks a template line");
  }
  wf.template_id = unescape_field(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, '\t');
    if (f.size() != 3 || f[0] != "STEP") {
      throw Error(ErrorCode::kMalformedInput, "bad workflow step line '" + line + "'");
    }
    wf.steps.push_back(WorkflowStep{unescape_field(f[1]), unescape_field(f[2])});
  }
  return wf;
}

WorkflowRegistry::WorkflowRegistry(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(*dir_, ec);
  for (const auto& entry : std::filesystem::directory_iterator(*dir_, ec)) {
    if (entry.path().extension() != ".wf") continue;
    Workflow wf = parse_workflow(read_file(entry.path()));
    workflows_[wf.name] = std::move(wf);
  }
}

Workflow WorkflowRegistry::save(const std::string& name, const std::string& template_id,
                                const Recording& recording) {
  validate_name(name);
  if (recording.empty()) {
    throw Error(ErrorCode::kEmptyRecording, "nothing recorded to save as '" + name + "'");
  }
  std::unique_lock lock(mu_);
  if (workflows_.count(name) > 0) {
    throw Error(ErrorCode::kDuplicateName, "workflow '" + name + "' already exists");
  }
  Workflow wf{name, template_id, recording.steps()};
  if (dir_) {
    const auto path = *dir_ / (name + ".wf");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << serialize_workflow(wf);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
  workflows_[name] = wf;
  return wf;
}

Workflow WorkflowRegistry::get(std::string_view name) const {
  std::shared_lock lock(mu_);
  const auto it = workflows_.find(name);
  if (it == workflows_.end()) {
    throw Error(ErrorCode::kUnknownWorkflow, "unknown workflow '" + std::string(name) + "'");
  }
  return it->second;
}

bool WorkflowRegistry::contains(std::string_view name) const {
  std::shared_lock lock(mu_);
  return workflows_.find(name) != workflows_.end();
}

std::vector<std::string> WorkflowRegistry::names() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [name, wf] : workflows_) out.push_back(name);
  return out;
}

std::string reground_sql(std::string_view sql, const RelationDB& target) {
  Query q = parse_sql(sql);
  if (!reground_query(q, target)) return std::string(sql);
  return to_sql(q);
}

ApplyResult apply_workflow(const Workflow& wf, const RelationDB& target,
                           const TemplateRegistry* templates, double threshold) {
  ApplyResult result;
  result.workflow = wf.name;
  if (templates != nullptr && wf.template_id != kUnknownTemplate) {
    const TemplateSignature sig = compute_signature(target);
    TemplateMatch m{wf.template_id, 0.0};
    try {
      m.score = signature_score(sig, templates->get(wf.template_id));
    } catch (const Error&) {
      m.signature_id = std::string(kUnknownTemplate);
    }
    if (m.score < threshold) {
      result.warnings.push_back("TemplateMismatchWarning: document scores " +
                                std::to_string(m.score) + " against template '" +
                                wf.template_id + "'");
    }
    result.template_match = m;
  }

  RelationDB db = target;
  db.clear_temp();
  for (std::size_t i = 0; i < wf.steps.size(); ++i) {
    const WorkflowStep& step = wf.steps[i];
    StepResult sr;
    sr.utterance = step.utterance;
    sr.sql = step.sql;
    try {
      if (!step.utterance.empty()) sr.sql = reground_sql(step.sql, db);
      sr.relation = execute_and_stage(sr.sql, db);
      sr.empty = sr.relation->rows.empty();
    } catch (const Error& e) {
      sr.error = std::string(error_code_name(e.code())) + ": " + e.what();
      sr.empty = true;
    }
    if (sr.empty) {
      result.warnings.push_back("step " + std::to_string(i + 1) +
                                (sr.error ? " failed: " + *sr.error : " returned no rows"));
    }
    result.steps.push_back(std::move(sr));
  }
  return result;
}

}  // namespace docrelate
