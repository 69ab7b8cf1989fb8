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

#include "properties.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "docrelate/entities.h"
#include "docrelate/query.h"
#include "docrelate/raster_ops.h"
#include "docrelate/relation_store.h"
#include "docrelate/text_util.h"
#include "docrelate/workflow.h"
#include "fixtures.h"
#include "generators.h"
#include "naive_sql.h"

namespace docrelate::testing {

void PropertyReport::fail(int case_index, const std::string& what) {
  if (failures++ == 0) first_failure = "case " + std::to_string(case_index) + ": " + what;
}

namespace {

double median_of(std::vector<int> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Words dropped at random into a small area so that chains, overlaps and
// ties are common.
std::vector<Word> scattered_words(Rng& rng, int n) {
  std::vector<Word> words;
  for (int i = 0; i < n; ++i) {
    Word w;
    w.text = "w" + std::to_string(i);
    const int x = uniform(rng, 0, 300);
    const int y = uniform(rng, 0, 200);
    w.bbox = {x, y, x + uniform(rng, 3, 60), y + uniform(rng, 6, 18)};
    words.push_back(w);
  }
  std::stable_sort(words.begin(), words.end(), [](const Word& a, const Word& b) {
    if (a.bbox.y0 != b.bbox.y0) return a.bbox.y0 < b.bbox.y0;
    return a.bbox.x0 < b.bbox.x0;
  });
  for (std::size_t i = 0; i < words.size(); ++i) words[i].word_id = static_cast<int>(i);
  return words;
}

std::vector<Word> property_words(Rng& rng, int case_index) {
  return case_index % 2 == 0 ? scattered_words(rng, uniform(rng, 1, 60))
                             : random_page_words(rng, uniform(rng, 1, 150));
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
  return x;
}

bool pair_on_same_line(const BBox& a, const BBox& b, double max_gap) {
  if (vertical_overlap(a, b) < 0.5 * std::min(a.height(), b.height())) return false;
  const int right_gap = b.x0 - a.x1;
  const int left_gap = a.x0 - b.x1;
  return (right_gap >= -2 && right_gap <= max_gap) || (left_gap >= -2 && left_gap <= max_gap);
}

}  // namespace

PropertyReport check_erosion(int cases, std::uint64_t seed) {
  PropertyReport rep{"erosion anti-extensivity", cases, 0, {}};
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    const BinaryRaster b = random_binary(rng, 40, 30);
    const int k = 2 * uniform(rng, 0, 3) + 1;
    const BinaryRaster e = erode(b, k);
    const int r = k / 2;
    bool ok = e.width == b.width && e.height == b.height;
    for (int y = 0; ok && y < b.height; ++y) {
      for (int x = 0; ok && x < b.width; ++x) {
        if (e.at(x, y) && !b.at(x, y)) {
          rep.fail(c, "eroded ink outside the source at " + std::to_string(x) + "," +
                          std::to_string(y));
          ok = false;
        }
        bool all = true;
        for (int dy = -r; dy <= r; ++dy) {
          for (int dx = -r; dx <= r; ++dx) {
            const int xx = x + dx;
            const int yy = y + dy;
            if (xx >= 0 && yy >= 0 && xx < b.width && yy < b.height && !b.at(xx, yy)) all = false;
          }
        }
        if (ok && all != e.at(x, y)) {
          rep.fail(c, "k=" + std::to_string(k) + " disagrees with the window rule");
          ok = false;
        }
      }
    }
  }
  return rep;
}

PropertyReport check_components(int cases, std::uint64_t seed) {
  PropertyReport rep{"connected-component partition", cases, 0, {}};
  Rng rng(seed);
  for (int c = 0; c < cases; ++c) {
    const BinaryRaster b = random_binary(rng, 40, 30);
    const Connectivity conn = c % 2 == 0 ? Connectivity::kEight : Connectivity::kFour;
    const auto comps = connected_components(b, conn);

    // Reference labeling by flood fill.
    const int w = b.width;
    std::vector<int> label(b.ink.size(), -1);
    int next = 0;
    for (int start = 0; start < static_cast<int>(b.ink.size()); ++start) {
      if (!b.ink[static_cast<std::size_t>(start)] || label[static_cast<std::size_t>(start)] >= 0) {
        continue;
      }
      std::vector<int> stack{start};
      label[static_cast<std::size_t>(start)] = next;
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        const int px = p % w;
        const int py = p / w;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if ((dx == 0 && dy == 0) || (conn == Connectivity::kFour && dx != 0 && dy != 0)) {
              continue;
            }
            const int x = px + dx;
            const int y = py + dy;
            if (x < 0 || y < 0 || x >= w || y >= b.height) continue;
            const auto q = static_cast<std::size_t>(y * w + x);
            if (b.ink[q] && label[q] < 0) {
              label[q] = next;
              stack.push_back(static_cast<int>(q));
            }
          }
        }
      }
      ++next;
    }

    std::set<std::vector<std::uint32_t>> expected;
    std::map<int, std::vector<std::uint32_t>> groups;
    for (std::size_t i = 0; i < label.size(); ++i) {
      if (label[i] >= 0) groups[label[i]].push_back(static_cast<std::uint32_t>(i));
    }
    for (auto& [l, px] : groups) expected.insert(px);

    std::set<std::vector<std::uint32_t>> got;
    std::size_t total = 0;
    for (const ConnectedComponent& cc : comps) {
      got.insert(cc.pixels);
      total += cc.pixels.size();
      BBox box{w, b.height, 0, 0};
      for (std::uint32_t p : cc.pixels) {
        box = {std::min(box.x0, static_cast<int>(p) % w), std::min(box.y0, static_cast<int>(p) / w),
               std::max(box.x1, static_cast<int>(p) % w + 1),
               std::max(box.y1, static_cast<int>(p) / w + 1)};
      }
      if (box != cc.bbox) rep.fail(c, "component bbox does not bound its pixels");
      if (cc.area != static_cast<std::int64_t>(cc.pixels.size())) rep.fail(c, "area != pixel count");
      if (!(cc.area <= cc.filled_area && cc.filled_area <= cc.bbox.area())) {
        rep.fail(c, "filled_area out of [area, bbox area]");
      }
    }
    if (total != b.ink_count()) rep.fail(c, "components do not cover the ink exactly once");
    if (got != expected) rep.fail(c, "partition differs from the flood-fill reference");
  }
  return rep;
}

PropertyReport check_lines_and_blocks(int cases, std::uint64_t seed) {
  PropertyReport rep{"line/block partition and predicate", cases, 0, {}};
  Rng rng(seed);
  const EngineConfig config;
  for (int c = 0; c < cases; ++c) {
    const std::vector<Word> words = property_words(rng, c);
    const std::vector<Line> lines = cluster_lines(words, config);

    // Reference: union of every pair passing the predicate.
    std::vector<int> heights;
    for (const Word& w : words) heights.push_back(w.bbox.height());
    const double max_gap = config.line_gap_factor * median_of(heights);
    std::vector<int> parent(words.size());
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t i = 0; i < words.size(); ++i) {
      for (std::size_t j = i + 1; j < words.size(); ++j) {
        if (pair_on_same_line(words[i].bbox, words[j].bbox, max_gap)) {
          const int a = find_root(parent, static_cast<int>(i));
          const int b = find_root(parent, static_cast<int>(j));
          parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
      }
    }
    std::map<int, std::set<int>> ref;
    for (std::size_t i = 0; i < words.size(); ++i) {
      ref[find_root(parent, static_cast<int>(i))].insert(static_cast<int>(i));
    }
    std::set<std::set<int>> expected;
    for (auto& [r, m] : ref) expected.insert(m);

    std::set<std::set<int>> got;
    std::vector<int> seen(words.size(), 0);
    for (std::size_t li = 0; li < lines.size(); ++li) {
      const Line& l = lines[li];
      if (l.line_id != static_cast<int>(li)) rep.fail(c, "line ids not dense");
      if (l.word_ids.empty()) rep.fail(c, "empty line");
      std::vector<std::string> texts;
      for (std::size_t k = 0; k < l.word_ids.size(); ++k) {
        const Word& w = words[static_cast<std::size_t>(l.word_ids[k])];
        ++seen[static_cast<std::size_t>(l.word_ids[k])];
        texts.push_back(w.text);
        if (k > 0 && words[static_cast<std::size_t>(l.word_ids[k - 1])].bbox.x0 > w.bbox.x0) {
          rep.fail(c, "line words not ordered by x0");
        }
      }
      if (join(texts, " ") != l.text) rep.fail(c, "line text is not the join of its words");
      got.insert(std::set<int>(l.word_ids.begin(), l.word_ids.end()));
      if (li > 0) {
        const BBox& p = lines[li - 1].bbox;
        if (std::pair(p.y0, p.x0) > std::pair(l.bbox.y0, l.bbox.x0)) {
          rep.fail(c, "lines not ordered by (y0, x0)");
        }
      }
    }
    for (int n : seen) {
      if (n != 1) rep.fail(c, "a word is not in exactly one line");
    }
    if (got != expected) rep.fail(c, "line partition differs from the pairwise reference");

    const std::vector<TextBlock> blocks = cluster_blocks(lines, config);
    std::vector<int> line_heights;
    for (const Line& l : lines) line_heights.push_back(l.bbox.height());
    const double x_tol = config.block_x_tol_factor * median_of(line_heights);
    std::vector<int> in_block(lines.size(), 0);
    for (const TextBlock& b : blocks) {
      if (b.line_ids.empty()) rep.fail(c, "empty block");
      for (std::size_t k = 0; k < b.line_ids.size(); ++k) {
        ++in_block[static_cast<std::size_t>(b.line_ids[k])];
        if (k == 0) continue;
        const BBox& a = lines[static_cast<std::size_t>(b.line_ids[k - 1])].bbox;
        const BBox& n = lines[static_cast<std::size_t>(b.line_ids[k])].bbox;
        if (!(std::abs(a.x0 - n.x0) <= x_tol && n.y0 - a.y1 <= 2 * a.height())) {
          rep.fail(c, "consecutive block lines break the block predicate");
        }
      }
    }
    for (int n : in_block) {
      if (n != 1) rep.fail(c, "a line is not in exactly one block");
    }
  }
  return rep;
}

PropertyReport check_adjacency(int cases, std::uint64_t seed) {
  PropertyReport rep{"adjacency coordinate soundness", cases, 0, {}};
  Rng rng(seed);
  const Direction dirs[] = {Direction::kLeftOf, Direction::kRightOf, Direction::kAbove,
                            Direction::kBelow};
  for (int c = 0; c < cases; ++c) {
    const std::vector<Word> words = property_words(rng, c);
    const std::vector<AdjacencyRow> rows = compute_adjacency(words);
    if (rows.size() != words.size() * 4) {
      rep.fail(c, "expected four rows per word");
      continue;
    }
    for (std::size_t i = 0; i < words.size(); ++i) {
      const BBox& a = words[i].bbox;
      for (int d = 0; d < 4; ++d) {
        // Reference: scan every word, keep the best by (distance, x0, id).
        std::optional<std::size_t> best;
        int best_dist = 0;
        for (std::size_t j = 0; j < words.size(); ++j) {
          if (j == i) continue;
          const BBox& b = words[j].bbox;
          const bool share_rows =
              vertical_overlap(a, b) >= 0.5 * std::min(a.height(), b.height());
          const bool share_cols = horizontal_overlap(a, b) >= 1;
          bool ok = false;
          int dist = 0;
          switch (dirs[d]) {
            case Direction::kRightOf: ok = share_rows && b.x0 >= a.x1 - 2; dist = b.x0 - a.x1; break;
            case Direction::kLeftOf: ok = share_rows && b.x1 <= a.x0 + 2; dist = a.x0 - b.x1; break;
            case Direction::kAbove: ok = share_cols && b.y1 <= a.y0 + 2; dist = a.y0 - b.y1; break;
            case Direction::kBelow: ok = share_cols && b.y0 >= a.y1 - 2; dist = b.y0 - a.y1; break;
          }
          if (!ok) continue;
          if (!best || std::tuple(dist, b.x0, words[j].word_id) <
                           std::tuple(best_dist, words[*best].bbox.x0, words[*best].word_id)) {
            best = j;
            best_dist = dist;
          }
        }
        const AdjacencyRow& row = rows[i * 4 + static_cast<std::size_t>(d)];
        const std::optional<int> want =
            best ? std::optional<int>(words[*best].word_id) : std::nullopt;
        if (row.relation != dirs[d] || row.anchor_word_id != words[i].word_id ||
            row.anchor_text != words[i].text) {
          rep.fail(c, "row layout differs");
        } else if (row.neighbor_word_id != want) {
          rep.fail(c, std::string(direction_table(dirs[d])) + " of word " +
                          std::to_string(i) + " differs from the brute-force nearest");
        } else if (row.neighbor_text != (best ? words[*best].text : std::string("null"))) {
          rep.fail(c, "neighbor text differs");
        }
        if (row.neighbor_word_id && *row.neighbor_word_id == row.anchor_word_id) {
          rep.fail(c, "word adjacent to itself");
        }
      }
    }
  }
  return rep;
}

PropertyReport check_ast_round_trip(int cases, std::uint64_t seed) {
  PropertyReport rep{"AST round-trip", cases, 0, {}};
  Rng rng(seed);
  RandomDb db = random_db(rng);
  for (int c = 0; c < cases; ++c) {
    if (c % 20 == 0) db = random_db(rng);
    const NaiveQuery nq = random_query(rng, db.tables, 0.2);
    const Query q = to_engine_query(nq);
    const std::string canonical = to_sql(q);
    const std::string noisy = render_sql(nq, rng);
    try {
      if (!(parse_sql(canonical) == q)) rep.fail(c, "canonical text reparses differently: " + canonical);
      if (!(parse_sql(noisy) == q)) rep.fail(c, "randomly spaced text parses differently: " + noisy);
      if (to_sql(parse_sql(canonical)) != canonical) rep.fail(c, "printing is not stable");
    } catch (const Error& e) {
      rep.fail(c, std::string(e.what()) + " in " + noisy);
    }
  }
  return rep;
}

PropertyReport check_populate_determinism(int cases, std::uint64_t seed) {
  PropertyReport rep{"populate determinism", cases, 0, {}};
  Rng rng(seed);
  const EngineConfig config;
  const auto dir = temp_dir("populate");
  for (int c = 0; c < cases; ++c) {
    RawDocument doc;
    doc.doc_id = "p" + std::to_string(c);
    doc.words = random_page_words(rng, uniform(rng, 1, 120));
    doc.page_size = {3000, 4000};
    if (parse_ocr_words(words_to_jsonwords(doc.words), OcrFormat::kJsonWords) != doc.words) {
      rep.fail(c, "jsonwords round trip changed the words");
    }
    const DocumentEntities e1 = build_entities(doc, config, demo_lexicons());
    const DocumentEntities e2 = build_entities(doc, config, demo_lexicons());
    const RelationDB a = populate(e1);
    const RelationDB b = populate(e2);
    if (a.base_relations() != b.base_relations()) rep.fail(c, "re-population differs");
    const RelationDB again = populate(e1);
    if (again.base_relations() != a.base_relations()) rep.fail(c, "populate is not pure");
    if (c % 10 == 0) {
      dump_db(a, dir / doc.doc_id);
      const RelationDB loaded = load_db(dir / doc.doc_id);
      if (loaded.base_relations() != a.base_relations() || loaded.doc_id() != a.doc_id()) {
        rep.fail(c, "dump/load round trip differs");
      }
    }
  }
  std::filesystem::remove_all(dir);
  return rep;
}

PropertyReport check_replay_determinism(int cases, std::uint64_t seed) {
  PropertyReport rep{"replay determinism", cases, 0, {}};
  Rng rng(seed);
  const EngineConfig config;
  for (int c = 0; c < cases; ++c) {
    RawDocument doc;
    doc.doc_id = "r" + std::to_string(c);
    doc.words = random_page_words(rng, uniform(rng, 5, 80));
    doc.page_size = {3000, 4000};
    RelationDB db = populate(build_entities(doc, config, demo_lexicons()));
    const Word& pick = doc.words[static_cast<std::size_t>(
        uniform(rng, 0, static_cast<int>(doc.words.size()) - 1))];
    const std::string lit = quote_string(pick.text);
    Workflow wf;
    wf.name = "replay" + std::to_string(c);
    wf.template_id = "unknown";
    wf.steps = {
        {"find the word", "SELECT line_id FROM words WHERE text=" + lit},
        {"", "SELECT * FROM lines WHERE line_id=(SELECT line_id FROM TEMP)"},
        {"text after it", "SELECT SUBSTR(text, pos(" + lit + ")) FROM TEMP"},
    };

    std::vector<Relation> authored;
    RelationDB session = db;
    for (const WorkflowStep& s : wf.steps) authored.push_back(execute_and_stage(s.sql, session));

    if (parse_workflow(serialize_workflow(wf)) != wf) rep.fail(c, "workflow text round trip");
    const ApplyResult first = apply_workflow(wf, db);
    const ApplyResult second = apply_workflow(wf, db);
    if (first.steps.size() != wf.steps.size() || second.steps.size() != wf.steps.size()) {
      rep.fail(c, "step count changed");
      continue;
    }
    for (std::size_t i = 0; i < wf.steps.size(); ++i) {
      const StepResult& x = first.steps[i];
      const StepResult& y = second.steps[i];
      if (x.error || !x.relation) {
        rep.fail(c, "step " + std::to_string(i + 1) + " failed: " + x.error.value_or("?"));
        break;
      }
      if (x.relation != y.relation || x.sql != y.sql || x.empty != y.empty) {
        rep.fail(c, "two replays differ at step " + std::to_string(i + 1));
      }
      if (*x.relation != authored[i]) {
        rep.fail(c, "replay differs from authoring at step " + std::to_string(i + 1));
      }
    }
    if (db.temp()) rep.fail(c, "replay leaked TEMP into the caller's database");
  }
  return rep;
}

PropertyReport check_query_differential(int dbs, int per_db, double error_rate,
                                        std::uint64_t seed) {
  PropertyReport rep{"query differential", dbs * per_db, 0, {}};
  Rng rng(seed);
  int index = 0;
  for (int d = 0; d < dbs; ++d) {
    const RandomDb db = random_db(rng);
    for (int k = 0; k < per_db; ++k, ++index) {
      const NaiveQuery nq = random_query(rng, db.tables, error_rate);
      const std::string sql = render_sql(nq, rng);
      const NaiveOutcome want = naive_evaluate(nq, db.tables);
      std::optional<Relation> got;
      std::optional<ErrorCode> got_error;
      try {
        got = evaluate(parse_sql(sql), db.db);
      } catch (const Error& e) {
        got_error = e.code();
      }
      if (want.error != got_error) {
        rep.fail(index, "error mismatch for " + sql + ": engine " +
                            (got_error ? std::string(error_code_name(*got_error)) : "ok") +
                            ", reference " +
                            (want.error ? std::string(error_code_name(*want.error)) : "ok"));
      } else if (want.relation != got) {
        rep.fail(index, "result mismatch for " + sql);
      }
    }
  }
  return rep;
}

std::vector<PropertyReport> run_invariant_suites(int cases, std::uint64_t seed) {
  return {check_erosion(cases, seed + 1),          check_components(cases, seed + 2),
          check_lines_and_blocks(cases, seed + 3), check_adjacency(cases, seed + 4),
          check_ast_round_trip(cases, seed + 5),   check_populate_determinism(cases, seed + 6),
          check_replay_determinism(cases, seed + 7)};
}

}  // namespace docrelate::testing
