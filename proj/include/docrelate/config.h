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

#ifndef DOCRELATE_CONFIG_H_
#define DOCRELATE_CONFIG_H_

#include <string>

namespace docrelate {

// Tunables for the whole pipeline. Defaults were tuned on the synthetic
// fixture suite under tests/.
struct EngineConfig {
  // Box detection.
  int erode_k = 3;
  double fill_min = 0.95;
  double hollow_max = 0.30;
  int min_box_w = 40;
  int min_box_h = 20;

  // Line and block clustering; both factors multiply a median height.
  double line_gap_factor = 2.0;
  double block_x_tol_factor = 0.75;

  // Fraction of a line (or word) that must fall inside a box to belong to it.
  double box_membership_min = 0.8;

  int kv_max_key_words = 4;

  double template_threshold = 0.6;
};

// Reads overrides from a JSON object; unknown keys raise MalformedInput.
EngineConfig config_from_json(const std::string& text);
std::string config_to_json(const EngineConfig& config);

}  // namespace docrelate

#endif  // DOCRELATE_CONFIG_H_
