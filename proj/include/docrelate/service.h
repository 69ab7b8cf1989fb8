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

#ifndef DOCRELATE_SERVICE_H_
#define DOCRELATE_SERVICE_H_

#include <string>

#include "docrelate/engine.h"
#include "httplib.h"
#include "json.hpp"

namespace docrelate {

// {name, columns: [{name, type}], rows: [[...]]}
nlohmann::json relation_to_json(const Relation& r);
nlohmann::json response_to_json(const Response& r);
nlohmann::json workflow_to_json(const Workflow& wf);
nlohmann::json apply_result_to_json(const ApplyResult& r);
nlohmann::json entities_to_json(const RelationDB& db);
nlohmann::json summary_to_json(const DocumentSummary& s);

// 400 for malformed requests, 404 for unknown ids, 422 for other pipeline
// failures.
int http_status(ErrorCode code);

// Registers every endpoint documented in docs/api.md. Responses use the
// envelope {ok: true, data} or {ok: false, error: {stage, code, message}}.
void install_routes(httplib::Server& server, Engine& engine);

}  // namespace docrelate

#endif  // DOCRELATE_SERVICE_H_
