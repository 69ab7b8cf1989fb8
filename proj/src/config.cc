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

#include "docrelate/config.h"

#include <json.hpp>

#include "docrelate/error.h"

namespace docrelate {

EngineConfig config_from_json(const std::string& text) {
  EngineConfig c;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput,
                std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw Error(ErrorCode::kMalformedInput, "config must be a JSON object");
  }
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "erode_k") c.erode_k = value.get<int>();
      else if (key == "fill_min") c.fill_min = value.get<double>();
      else if (key == "hollow_max") c.hollow_max = value.get<double>();
      else if (key == "min_box_w") c.min_box_w = value.get<int>();
      else if (key == "min_box_h") c.min_box_h = value.get<int>();
      else if (key == "line_gap_factor") c.line_gap_factor = value.get<double>();
      else if (key == "block_x_tol_factor") c.block_x_tol_factor = value.get<double>();
      else if (key == "box_membership_min") c.box_membership_min = value.get<double>();
      else if (key == "kv_max_key_words") c.kv_max_key_words = value.get<int>();
      else if (key == "template_threshold") c.template_threshold = value.get<double>();
      else throw Error(ErrorCode::kMalformedInput, "unknown config key: " + key);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput,
                std::string("bad config value: ") + e.what());
  }
  return c;
}

std::string config_to_json(const EngineConfig& c) {
  nlohmann::json j = {
      {"erode_k", c.erode_k},
      {"fill_min", c.fill_min},
      {"hollow_max", c.hollow_max},
      {"min_box_w", c.min_box_w},
      {"min_box_h", c.min_box_h},
      {"line_gap_factor", c.line_gap_factor},
      {"block_x_tol_factor", c.block_x_tol_factor},
      {"box_membership_min", c.box_membership_min},
      {"kv_max_key_words", c.kv_max_key_words},
      {"template_threshold", c.template_threshold},
  };
  return j.dump(2);
}

}  // namespace docrelate
