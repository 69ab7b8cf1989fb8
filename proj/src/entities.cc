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

#include "docrelate/entities.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <regex>
#include <unordered_map>

#include "docrelate/error.h"
#include "docrelate/text_util.h"

namespace docrelate {

namespace {

double median(std::vector<int> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

bool same_line(const BBox& a, const BBox& b, double max_gap) {
  const double overlap = vertical_overlap(a, b);
  if (overlap < 0.5 * std::min(a.height(), b.height())) return false;
  const int gap_ab = b.x0 - a.x1;
  const int gap_ba = a.x0 - b.x1;
  return (gap_ab >= -2 && gap_ab <= max_gap) || (gap_ba >= -2 && gap_ba <= max_gap);
}

}  // namespace

std::string_view direction_table(Direction d) {
  switch (d) {
    case Direction::kLeftOf: return "leftof";
    case Direction::kRightOf: return "rightof";
    case Direction::kAbove: return "above";
    case Direction::kBelow: return "below";
  }
  return "";
}

std::string_view data_type_name(DataType t) {
  switch (t) {
    case DataType::kDate: return "DATE";
    case DataType::kAmount: return "AMOUNT";
    case DataType::kSwiftCode: return "SWIFT_CODE";
    case DataType::kPhone: return "PHONE";
    case DataType::kZip: return "ZIP";
    case DataType::kCountry: return "COUNTRY";
    case DataType::kCity: return "CITY";
    case DataType::kNone: return "NONE";
  }
  return "NONE";
}

std::vector<Line> cluster_lines(std::span<const Word> words,
                                const EngineConfig& config) {
  const std::size_t n = words.size();
  std::vector<int> heights;
  heights.reserve(n);
  for (const Word& w : words) heights.push_back(w.bbox.height());
  const double max_gap = config.line_gap_factor * median(heights);

  std::vector<std::size_t> by_top(n);
  std::iota(by_top.begin(), by_top.end(), 0);
  std::stable_sort(by_top.begin(), by_top.end(), [&](std::size_t a, std::size_t b) {
    return words[a].bbox.y0 < words[b].bbox.y0;
  });

  // Only pairs whose row ranges intersect can satisfy the overlap test.
  DisjointSet sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    const BBox& a = words[by_top[i]].bbox;
    for (std::size_t j = i + 1; j < n && words[by_top[j]].bbox.y0 < a.y1; ++j) {
      if (same_line(a, words[by_top[j]].bbox, max_gap)) {
        sets.unite(by_top[i], by_top[j]);
      }
    }
  }

  std::unordered_map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(i);

  std::vector<Line> lines;
  lines.reserve(groups.size());
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      if (words[a].bbox.x0 != words[b].bbox.x0) {
        return words[a].bbox.x0 < words[b].bbox.x0;
      }
      return words[a].word_id < words[b].word_id;
    });
    Line line;
    line.bbox = words[members.front()].bbox;
    std::vector<std::string> texts;
    for (std::size_t m : members) {
      line.word_ids.push_back(words[m].word_id);
      line.bbox = bbox_union(line.bbox, words[m].bbox);
      texts.push_back(words[m].text);
    }
    line.text = join(texts, " ");
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    if (a.bbox.y0 != b.bbox.y0) return a.bbox.y0 < b.bbox.y0;
    if (a.bbox.x0 != b.bbox.x0) return a.bbox.x0 < b.bbox.x0;
    return a.word_ids.front() < b.word_ids.front();
  });
  for (std::size_t i = 0; i < lines.size(); ++i) {
    lines[i].line_id = static_cast<int>(i);
  }
  return lines;
}

double block_x_tolerance(std::span<const Line> lines, const EngineConfig& config) {
  std::vector<int> heights;
  heights.reserve(lines.size());
  for (const Line& l : lines) heights.push_back(l.bbox.height());
  return config.block_x_tol_factor * median(heights);
}

bool block_predicate(const Line& a, const Line& b, double x_tolerance) {
  return std::abs(a.bbox.x0 - b.bbox.x0) <= x_tolerance &&
         b.bbox.y0 - a.bbox.y1 <= 2 * a.bbox.height();
}

std::vector<TextBlock> cluster_blocks(std::span<const Line> lines,
                                      const EngineConfig& config) {
  const double x_tol = block_x_tolerance(lines, config);
  std::vector<std::size_t> order(lines.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (lines[a].bbox.y0 != lines[b].bbox.y0) return lines[a].bbox.y0 < lines[b].bbox.y0;
    return lines[a].bbox.x0 < lines[b].bbox.x0;
  });

  std::vector<std::vector<std::size_t>> members;
  for (std::size_t idx : order) {
    const Line& line = lines[idx];
    std::size_t best = members.size();
    int best_gap = std::numeric_limits<int>::max();
    int best_dx = std::numeric_limits<int>::max();
    for (std::size_t b = 0; b < members.size(); ++b) {
      const Line& last = lines[members[b].back()];
      if (!block_predicate(last, line, x_tol)) continue;
      const int gap = line.bbox.y0 - last.bbox.y1;
      const int dx = std::abs(line.bbox.x0 - last.bbox.x0);
      if (gap < best_gap || (gap == best_gap && dx < best_dx)) {
        best = b;
        best_gap = gap;
        best_dx = dx;
      }
    }
    if (best == members.size()) members.emplace_back();
    members[best].push_back(idx);
  }

  std::vector<TextBlock> blocks;
  blocks.reserve(members.size());
  for (const auto& m : members) {
    TextBlock block;
    block.block_id = static_cast<int>(blocks.size());
    block.bbox = lines[m.front()].bbox;
    for (std::size_t idx : m) {
      block.line_ids.push_back(lines[idx].line_id);
      block.bbox = bbox_union(block.bbox, lines[idx].bbox);
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

namespace {

std::optional<int> smallest_containing_box(const BBox& entity,
                                           std::span<const BoxRegion> boxes,
                                           double min_fraction) {
  const double area = static_cast<double>(entity.area());
  std::optional<int> best;
  std::int64_t best_area = 0;
  int best_id = 0;
  for (const BoxRegion& box : boxes) {
    if (area <= 0) break;
    const double frac = static_cast<double>(intersection_area(entity, box.bbox)) / area;
    if (frac < min_fraction) continue;
    const std::int64_t box_area = box.bbox.area();
    if (!best || box_area < best_area || (box_area == best_area && box.box_id < best_id)) {
      best = box.box_id;
      best_area = box_area;
      best_id = box.box_id;
    }
  }
  return best;
}

}  // namespace

BoxMembership assign_box_membership(std::span<const Line> lines,
                                    std::span<const Word> words,
                                    std::span<const BoxRegion> boxes,
                                    double min_fraction) {
  BoxMembership m;
  m.line_box.reserve(lines.size());
  for (const Line& l : lines) {
    m.line_box.push_back(smallest_containing_box(l.bbox, boxes, min_fraction));
  }
  m.word_box.reserve(words.size());
  for (const Word& w : words) {
    m.word_box.push_back(smallest_containing_box(w.bbox, boxes, min_fraction));
  }
  return m;
}

namespace {

struct Candidate {
  std::size_t index = 0;
  int distance = 0;
};

bool better(const Candidate& c, std::optional<Candidate>& best,
            std::span<const Word> words) {
  if (!best) return true;
  if (c.distance != best->distance) return c.distance < best->distance;
  const Word& a = words[c.index];
  const Word& b = words[best->index];
  if (a.bbox.x0 != b.bbox.x0) return a.bbox.x0 < b.bbox.x0;
  return a.word_id < b.word_id;
}

}  // namespace

std::vector<AdjacencyRow> compute_adjacency(std::span<const Word> words) {
  const std::size_t n = words.size();
  std::vector<std::size_t> by_top(n);
  std::vector<std::size_t> by_left(n);
  std::iota(by_top.begin(), by_top.end(), 0);
  std::iota(by_left.begin(), by_left.end(), 0);
  std::sort(by_top.begin(), by_top.end(), [&](std::size_t a, std::size_t b) {
    return words[a].bbox.y0 < words[b].bbox.y0;
  });
  std::sort(by_left.begin(), by_left.end(), [&](std::size_t a, std::size_t b) {
    return words[a].bbox.x0 < words[b].bbox.x0;
  });
  std::vector<int> tops;
  std::vector<int> lefts;
  int max_h = 0;
  int max_w = 0;
  for (std::size_t i : by_top) tops.push_back(words[i].bbox.y0);
  for (std::size_t i : by_left) lefts.push_back(words[i].bbox.x0);
  for (const Word& w : words) {
    max_h = std::max(max_h, w.bbox.height());
    max_w = std::max(max_w, w.bbox.width());
  }

  std::vector<AdjacencyRow> rows;
  rows.reserve(n * 4);
  for (std::size_t i = 0; i < n; ++i) {
    const BBox& a = words[i].bbox;
    std::optional<Candidate> left;
    std::optional<Candidate> right;
    std::optional<Candidate> up;
    std::optional<Candidate> down;

    // Horizontal neighbors must share rows; a candidate's top lies in
    // (a.y0 - max_h, a.y1).
    auto lo = std::upper_bound(tops.begin(), tops.end(), a.y0 - max_h);
    for (auto it = lo; it != tops.end() && *it < a.y1; ++it) {
      const std::size_t j = by_top[static_cast<std::size_t>(it - tops.begin())];
      if (j == i) continue;
      const BBox& b = words[j].bbox;
      if (vertical_overlap(a, b) < 0.5 * std::min(a.height(), b.height())) continue;
      if (b.x0 >= a.x1 - 2) {
        Candidate c{j, b.x0 - a.x1};
        if (better(c, right, words)) right = c;
      }
      if (b.x1 <= a.x0 + 2) {
        Candidate c{j, a.x0 - b.x1};
        if (better(c, left, words)) left = c;
      }
    }
    // Vertical neighbors must share at least one column.
    auto lo_x = std::upper_bound(lefts.begin(), lefts.end(), a.x0 - max_w);
    for (auto it = lo_x; it != lefts.end() && *it < a.x1; ++it) {
      const std::size_t j = by_left[static_cast<std::size_t>(it - lefts.begin())];
      if (j == i) continue;
      const BBox& b = words[j].bbox;
      if (horizontal_overlap(a, b) < 1) continue;
      if (b.y1 <= a.y0 + 2) {
        Candidate c{j, a.y0 - b.y1};
        if (better(c, up, words)) up = c;
      }
      if (b.y0 >= a.y1 - 2) {
        Candidate c{j, b.y0 - a.y1};
        if (better(c, down, words)) down = c;
      }
    }

    auto emit = [&](Direction d, const std::optional<Candidate>& c) {
      AdjacencyRow row;
      row.relation = d;
      row.anchor_word_id = words[i].word_id;
      row.anchor_text = words[i].text;
      if (c) {
        row.neighbor_word_id = words[c->index].word_id;
        row.neighbor_text = words[c->index].text;
      }
      rows.push_back(std::move(row));
    };
    emit(Direction::kLeftOf, left);
    emit(Direction::kRightOf, right);
    emit(Direction::kAbove, up);
    emit(Direction::kBelow, down);
  }
  return rows;
}

std::vector<LineBelowRow> line_below_word(std::span<const TextBlock> blocks,
                                          std::span<const Line> lines,
                                          std::span<const Word> words) {
  std::unordered_map<int, const Line*> line_by_id;
  for (const Line& l : lines) line_by_id[l.line_id] = &l;
  std::unordered_map<int, const Word*> word_by_id;
  for (const Word& w : words) word_by_id[w.word_id] = &w;

  std::vector<LineBelowRow> rows;
  for (const TextBlock& block : blocks) {
    for (std::size_t k = 0; k < block.line_ids.size(); ++k) {
      const Line* line = line_by_id.at(block.line_ids[k]);
      const Line* next =
          k + 1 < block.line_ids.size() ? line_by_id.at(block.line_ids[k + 1]) : nullptr;
      for (int wid : line->word_ids) {
        LineBelowRow row;
        row.word_id = wid;
        row.word_text = word_by_id.at(wid)->text;
        row.block_id = block.block_id;
        if (next != nullptr) {
          row.below_line_id = next->line_id;
          row.below_line_text = next->text;
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<KeyValueRow> extract_key_values(std::span<const Line> lines,
                                            const EngineConfig& config) {
  std::vector<KeyValueRow> rows;
  for (const Line& line : lines) {
    const std::size_t colon = line.text.find(':');
    if (colon == std::string::npos) continue;
    const std::string key = trim(line.text.substr(0, colon));
    const std::string value = trim(line.text.substr(colon + 1));
    if (key.empty() || value.empty()) continue;
    if (static_cast<int>(split_whitespace(key).size()) > config.kv_max_key_words) continue;
    rows.push_back(KeyValueRow{key, value, "colon", line.line_id});
  }
  return rows;
}

namespace {

const std::string& currency_symbols_re() {
  static const std::string re = "(?:\\$|€|£|¥|₹|Rs\\.?)";
  return re;
}

const std::vector<std::string>& iso_currency_codes() {
  static const std::vector<std::string> codes = {
      "USD", "EUR", "GBP", "INR", "JPY", "CNY", "BDT", "AUD", "CAD", "CHF",
      "SGD", "HKD", "AED", "SAR", "ZAR", "NZD", "SEK", "NOK", "DKK", "RUB",
      "BRL", "MXN", "KRW", "TRY", "PKR", "LKR", "NPR", "MYR", "THB", "IDR"};
  return codes;
}

std::string currency_re() {
  return "(?:" + currency_symbols_re() + "|" + join(iso_currency_codes(), "|") + ")";
}

const std::string kNumberRe = "(?:\\d{1,3}(?:,\\d{3})+|\\d+)(?:\\.\\d+)?";

bool is_currency_token(std::string_view token) {
  static const std::regex re("^" + currency_re() + "$");
  return std::regex_match(std::string(token), re);
}

bool is_bare_number(std::string_view token) {
  static const std::regex re("^" + kNumberRe + "$");
  return std::regex_match(std::string(token), re);
}

// Strips wrapping punctuation that never belongs to a typed value.
std::string token_core(std::string_view token) {
  static const std::string kTrailing = ",;:.!?\"')]}";
  static const std::string kLeading = "\"'([{";
  std::size_t b = 0;
  std::size_t e = token.size();
  while (b < e && kLeading.find(token[b]) != std::string::npos) ++b;
  while (e > b && kTrailing.find(token[e - 1]) != std::string::npos) --e;
  return std::string(token.substr(b, e - b));
}

bool is_date_token(const std::string& t) {
  static const std::regex dmy("^(\\d{1,2})[/-](\\d{1,2})[/-](\\d{4})$");
  static const std::regex ymd("^(\\d{4})-(\\d{1,2})-(\\d{1,2})$");
  std::smatch m;
  if (std::regex_match(t, m, dmy)) {
    const int d = std::stoi(m[1]);
    const int mo = std::stoi(m[2]);
    return d >= 1 && d <= 31 && mo >= 1 && mo <= 12;
  }
  if (std::regex_match(t, m, ymd)) {
    const int mo = std::stoi(m[2]);
    const int d = std::stoi(m[3]);
    return d >= 1 && d <= 31 && mo >= 1 && mo <= 12;
  }
  return false;
}

bool is_month_name(const std::string& t) {
  static const std::vector<std::string> months = {
      "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "sept",
      "oct", "nov", "dec", "january", "february", "march", "april", "june",
      "july", "august", "september", "october", "november", "december"};
  const std::string lower = to_lower_ascii(t);
  return std::find(months.begin(), months.end(), lower) != months.end();
}

bool is_amount_token(const std::string& t) {
  static const std::regex re("^(?:" + currency_re() + "\\s?" + kNumberRe + "|" +
                             kNumberRe + "\\s?" + currency_re() + ")$");
  static const std::regex decorated("^(?:\\d{1,3}(?:,\\d{3})+(?:\\.\\d+)?|\\d+\\.\\d+)$");
  return std::regex_match(t, re) || std::regex_match(t, decorated);
}

bool is_swift_token(const std::string& t) {
  if (t.size() != 8 && t.size() != 11) return false;
  bool letter = false;
  for (char c : t) {
    const bool upper = c >= 'A' && c <= 'Z';
    const bool digit = c >= '0' && c <= '9';
    if (!upper && !digit) return false;
    letter = letter || upper;
  }
  auto is_letter = [](char c) { return c >= 'A' && c <= 'Z'; };
  return letter && (is_letter(t[4]) || is_letter(t[5]));
}

bool is_phone_chars(const std::string& t) {
  static const std::regex re("^\\+?[\\d()\\-]*\\d[\\d()\\-]*$");
  return std::regex_match(t, re);
}

int digit_count(const std::string& t) {
  return static_cast<int>(std::count_if(t.begin(), t.end(), [](char c) {
    return c >= '0' && c <= '9';
  }));
}

bool is_zip_token(const std::string& t) {
  static const std::regex re(
      "^(?:\\d{4,6}|\\d{5}-\\d{4}|\\d{4}[A-Z]{2}|[A-Z]\\d[A-Z]\\d[A-Z]\\d)$");
  return std::regex_match(t, re);
}

}  // namespace

DataType classify_token(std::string_view token) {
  const std::string t = token_core(token);
  if (t.empty()) return DataType::kNone;
  if (is_date_token(t)) return DataType::kDate;
  if (is_amount_token(t)) return DataType::kAmount;
  if (is_swift_token(t)) return DataType::kSwiftCode;
  if (is_zip_token(t)) return DataType::kZip;
  if (is_phone_chars(t) && digit_count(t) >= 7) return DataType::kPhone;
  return DataType::kNone;
}

std::vector<TypedWordRow> tag_data_types(std::span<const Word> words,
                                         std::span<const Line> lines,
                                         const Lexicons& lexicons) {
  std::unordered_map<int, std::size_t> index_of;
  for (std::size_t i = 0; i < words.size(); ++i) index_of[words[i].word_id] = i;

  std::vector<DataType> best(words.size(), DataType::kNone);
  auto offer = [&](std::size_t i, DataType t) {
    if (static_cast<int>(t) < static_cast<int>(best[i])) best[i] = t;
  };
  for (std::size_t i = 0; i < words.size(); ++i) {
    offer(i, classify_token(words[i].text));
  }

  for (const Line& line : lines) {
    std::vector<std::size_t> idx;
    std::vector<std::string> cores;
    for (int wid : line.word_ids) {
      const auto it = index_of.find(wid);
      if (it == index_of.end()) continue;
      idx.push_back(it->second);
      cores.push_back(token_core(words[it->second].text));
    }
    const std::size_t n = idx.size();
    for (std::size_t k = 0; k < n; ++k) {
      // "dd Mon yyyy"
      if (k + 2 < n) {
        static const std::regex day("^\\d{1,2}$");
        static const std::regex year("^\\d{4}$");
        if (std::regex_match(cores[k], day) && std::stoi(cores[k]) >= 1 &&
            std::stoi(cores[k]) <= 31 && is_month_name(cores[k + 1]) &&
            std::regex_match(cores[k + 2], year)) {
          for (std::size_t q = k; q < k + 3; ++q) offer(idx[q], DataType::kDate);
        }
      }
      // A bare number next to a currency token.
      if (is_bare_number(cores[k]) &&
          ((k > 0 && is_currency_token(cores[k - 1])) ||
           (k + 1 < n && is_currency_token(cores[k + 1])))) {
        offer(idx[k], DataType::kAmount);
      }
    }
    // Phone numbers split across tokens ("+1 555 123 4567").
    for (std::size_t k = 0; k < n;) {
      std::size_t e = k;
      int digits = 0;
      while (e < n && is_phone_chars(cores[e]) &&
             (e == k || cores[e].find('+') == std::string::npos)) {
        digits += digit_count(cores[e]);
        ++e;
      }
      if (e - k >= 2 && digits >= 7) {
        for (std::size_t q = k; q < e; ++q) offer(idx[q], DataType::kPhone);
      }
      k = std::max(e, k + 1);
    }
    // Gazetteer entries, longest first.
    auto match_gazetteer = [&](const Gazetteer& g, DataType type) {
      if (g.size() == 0) return;
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t len = std::min(g.max_tokens(), n - k); len >= 1; --len) {
          std::vector<std::string> span(cores.begin() + static_cast<long>(k),
                                        cores.begin() + static_cast<long>(k + len));
          if (g.contains(join(span, " "))) {
            for (std::size_t q = k; q < k + len; ++q) offer(idx[q], type);
            break;
          }
        }
      }
    };
    match_gazetteer(lexicons.countries, DataType::kCountry);
    match_gazetteer(lexicons.cities, DataType::kCity);
  }

  std::vector<TypedWordRow> rows;
  rows.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    rows.push_back({words[i].word_id, best[i]});
  }
  return rows;
}

DocumentEntities build_entities(const RawDocument& doc,
                                const EngineConfig& config,
                                const Lexicons& lexicons) {
  DocumentEntities e;
  e.doc_id = doc.doc_id;
  e.page_size = doc.page_size;
  e.words = doc.words;
  for (std::size_t i = 0; i < e.words.size(); ++i) {
    if (e.words[i].word_id != static_cast<int>(i)) {
      throw Error(ErrorCode::kSchemaViolation, "word ids must be 0..n-1 in order");
    }
  }
  e.lines = cluster_lines(e.words, config);
  e.blocks = cluster_blocks(e.lines, config);
  for (const TextBlock& b : e.blocks) {
    for (int lid : b.line_ids) e.lines[static_cast<std::size_t>(lid)].block_id = b.block_id;
  }
  if (doc.raster) e.boxes = detect_boxes(*doc.raster, config);
  const BoxMembership membership =
      assign_box_membership(e.lines, e.words, e.boxes, config.box_membership_min);
  for (std::size_t i = 0; i < e.lines.size(); ++i) e.lines[i].box_id = membership.line_box[i];
  e.word_box = membership.word_box;
  e.word_line.assign(e.words.size(), -1);
  for (const Line& l : e.lines) {
    for (int wid : l.word_ids) e.word_line[static_cast<std::size_t>(wid)] = l.line_id;
  }
  e.adjacency = compute_adjacency(e.words);
  e.line_below = line_below_word(e.blocks, e.lines, e.words);
  e.key_values = extract_key_values(e.lines, config);
  e.typed_words = tag_data_types(e.words, e.lines, lexicons);
  return e;
}

}  // namespace docrelate
