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

#include "docrelate/ingest.h"

#include <png.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <json.hpp>

#include "docrelate/error.h"
#include "docrelate/text_util.h"

namespace docrelate {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedInput, what);
}

[[noreturn]] void malformed_image(const std::string& what) {
  throw Error(ErrorCode::kMalformedImage, what);
}

bool parse_int(std::string_view s, int& out) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_double(std::string_view s, double& out) {
  const std::string tmp = trim(s);
  if (tmp.empty()) return false;
  char* end = nullptr;
  out = std::strtod(tmp.c_str(), &end);
  return end == tmp.c_str() + tmp.size();
}

// Applies the shared token filter and pushes a word when it survives.
void emit_word(std::vector<Word>& out, std::string_view raw_text, BBox bbox,
               double confidence) {
  std::string text = collapse_whitespace(raw_text);
  if (text.empty() || !bbox.valid() || !(confidence > 0.0)) return;
  out.push_back(Word{0, std::move(text), bbox, std::min(confidence, 1.0)});
}

std::vector<Word> parse_tsv(std::string_view payload) {
  std::vector<Word> words;
  std::size_t line_no = 0;
  for (std::string line : split(payload, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    if (line.find('\t') != std::string::npos) {
      fields = split(line, '\t');
    } else {
      // Whitespace-separated variant: everything past column 11 is text.
      std::vector<std::string> parts = split_whitespace(line);
      for (std::size_t i = 0; i < parts.size() && i < 11; ++i) {
        fields.push_back(parts[i]);
      }
      if (parts.size() > 11) {
        fields.push_back(join({parts.begin() + 11, parts.end()}, " "));
      }
    }
    if (line_no == 1 && !fields.empty() && fields[0] == "level") continue;
    if (fields.size() < 11) {
      malformed("tsv line " + std::to_string(line_no) + ": expected 12 columns, got " +
                std::to_string(fields.size()));
    }
    int level = 0;
    int left = 0;
    int top = 0;
    int width = 0;
    int height = 0;
    double conf = 0.0;
    if (!parse_int(fields[0], level) || !parse_int(fields[6], left) ||
        !parse_int(fields[7], top) || !parse_int(fields[8], width) ||
        !parse_int(fields[9], height) || !parse_double(fields[10], conf)) {
      malformed("tsv line " + std::to_string(line_no) + ": non-numeric geometry");
    }
    std::string text;
    for (std::size_t i = 11; i < fields.size(); ++i) {
      if (i > 11) text += ' ';
      text += fields[i];
    }
    emit_word(words, text, BBox{left, top, left + width, top + height},
              conf / 100.0);
  }
  return words;
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    const std::size_t semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += s[i];
      continue;
    }
    const std::string_view ent = s.substr(i + 1, semi - i - 1);
    std::string rep;
    if (ent == "amp") rep = "&";
    else if (ent == "lt") rep = "<";
    else if (ent == "gt") rep = ">";
    else if (ent == "quot") rep = "\"";
    else if (ent == "apos") rep = "'";
    else if (ent == "nbsp") rep = " ";
    else if (!ent.empty() && ent[0] == '#') {
      unsigned long cp = 0;
      const bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
      const std::string digits(ent.substr(hex ? 2 : 1));
      char* end = nullptr;
      cp = std::strtoul(digits.c_str(), &end, hex ? 16 : 10);
      if (digits.empty() || *end != '\0' || cp > 0x10FFFF) {
        out += s[i];
        continue;
      }
      if (cp < 0x80) {
        rep += static_cast<char>(cp);
      } else if (cp < 0x800) {
        rep += static_cast<char>(0xC0 | (cp >> 6));
        rep += static_cast<char>(0x80 | (cp & 0x3F));
      } else if (cp < 0x10000) {
        rep += static_cast<char>(0xE0 | (cp >> 12));
        rep += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        rep += static_cast<char>(0x80 | (cp & 0x3F));
      } else {
        rep += static_cast<char>(0xF0 | (cp >> 18));
        rep += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        rep += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        rep += static_cast<char>(0x80 | (cp & 0x3F));
      }
    } else {
      out += s[i];
      continue;
    }
    out += rep;
    i = semi;
  }
  return out;
}

std::string strip_tags(std::string_view s) {
  std::string out;
  bool in_tag = false;
  for (char c : s) {
    if (c == '<') {
      in_tag = true;
    } else if (c == '>') {
      in_tag = false;
    } else if (!in_tag) {
      out += c;
    }
  }
  return out;
}

// Value of attribute `name` inside an opening tag, if present.
std::optional<std::string> tag_attribute(std::string_view tag,
                                         std::string_view name) {
  std::size_t pos = 0;
  while ((pos = tag.find(name, pos)) != std::string_view::npos) {
    const bool boundary =
        pos > 0 && (tag[pos - 1] == ' ' || tag[pos - 1] == '\t' ||
                    tag[pos - 1] == '\n' || tag[pos - 1] == '\r');
    std::size_t p = pos + name.size();
    while (p < tag.size() && tag[p] == ' ') ++p;
    if (!boundary || p >= tag.size() || tag[p] != '=') {
      pos += name.size();
      continue;
    }
    ++p;
    while (p < tag.size() && tag[p] == ' ') ++p;
    if (p >= tag.size()) return std::nullopt;
    const char quote = tag[p];
    if (quote == '"' || quote == '\'') {
      const std::size_t close = tag.find(quote, p + 1);
      if (close == std::string_view::npos) return std::nullopt;
      return std::string(tag.substr(p + 1, close - p - 1));
    }
    std::size_t e = p;
    while (e < tag.size() && tag[e] != ' ' && tag[e] != '>' && tag[e] != '/') ++e;
    return std::string(tag.substr(p, e - p));
  }
  return std::nullopt;
}

std::vector<Word> parse_hocr(std::string_view payload) {
  std::vector<Word> words;
  if (payload.find('<') == std::string_view::npos) {
    malformed("hocr payload contains no markup");
  }
  std::size_t pos = 0;
  while (true) {
    const std::size_t lt = payload.find('<', pos);
    if (lt == std::string_view::npos) break;
    const std::size_t gt = payload.find('>', lt);
    if (gt == std::string_view::npos) malformed("unterminated tag in hocr");
    const std::string_view tag = payload.substr(lt, gt - lt + 1);
    pos = gt + 1;
    if (tag.size() < 2 || tag[1] == '/' || tag[1] == '!' || tag[1] == '?') {
      continue;
    }
    const auto cls = tag_attribute(tag, "class");
    if (!cls) continue;
    const auto classes = split_whitespace(*cls);
    if (std::find(classes.begin(), classes.end(), "ocrx_word") == classes.end()) {
      continue;
    }
    std::size_t name_end = 1;
    while (name_end < tag.size() && std::isalnum(static_cast<unsigned char>(tag[name_end]))) {
      ++name_end;
    }
    const std::string name = to_lower_ascii(tag.substr(1, name_end - 1));
    const std::string open = "<" + name;
    const std::string close = "</" + name;

    // Find the matching close tag, honoring nested elements of the same name.
    int depth = 1;
    std::size_t scan = pos;
    std::size_t content_end = std::string_view::npos;
    while (depth > 0) {
      const std::size_t next = payload.find('<', scan);
      if (next == std::string_view::npos) break;
      const std::size_t next_gt = payload.find('>', next);
      if (next_gt == std::string_view::npos) break;
      const std::string inner = to_lower_ascii(payload.substr(next, next_gt - next + 1));
      if (inner.rfind(close, 0) == 0) {
        if (--depth == 0) content_end = next;
      } else if (inner.rfind(open, 0) == 0 &&
                 (inner.size() > open.size() &&
                  (inner[open.size()] == ' ' || inner[open.size()] == '>'))) {
        if (inner[inner.size() - 2] != '/') ++depth;
      }
      scan = next_gt + 1;
    }
    if (content_end == std::string_view::npos) {
      malformed("ocrx_word element is not closed");
    }
    const auto title = tag_attribute(tag, "title");
    if (!title) malformed("ocrx_word element has no title attribute");
    BBox bbox;
    bool have_bbox = false;
    double conf = 1.0;
    for (const std::string& prop : split(*title, ';')) {
      const auto parts = split_whitespace(prop);
      if (parts.empty()) continue;
      if (parts[0] == "bbox") {
        if (parts.size() != 5 || !parse_int(parts[1], bbox.x0) ||
            !parse_int(parts[2], bbox.y0) || !parse_int(parts[3], bbox.x1) ||
            !parse_int(parts[4], bbox.y1)) {
          malformed("bad bbox in hocr title: " + *title);
        }
        have_bbox = true;
      } else if (parts[0] == "x_wconf" && parts.size() == 2) {
        if (!parse_double(parts[1], conf)) malformed("bad x_wconf: " + *title);
        conf /= 100.0;
      }
    }
    if (!have_bbox) malformed("ocrx_word element has no bbox");
    const std::string text =
        decode_entities(strip_tags(payload.substr(pos, content_end - pos)));
    emit_word(words, text, bbox, conf);
    pos = content_end;
  }
  return words;
}

int json_coord(const nlohmann::json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    malformed(std::string("jsonwords entry lacks numeric '") + key + "'");
  }
  return static_cast<int>(std::lround(it->get<double>()));
}

std::vector<Word> parse_jsonwords(std::string_view payload) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(payload);
  } catch (const nlohmann::json::exception& e) {
    malformed(std::string("jsonwords is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) malformed("jsonwords payload must be a JSON array");
  std::vector<Word> words;
  for (const auto& entry : doc) {
    if (!entry.is_object()) malformed("jsonwords entries must be objects");
    const auto t = entry.find("t");
    if (t == entry.end() || !t->is_string()) {
      malformed("jsonwords entry lacks string 't'");
    }
    BBox bbox{json_coord(entry, "x0"), json_coord(entry, "y0"),
              json_coord(entry, "x1"), json_coord(entry, "y1")};
    double conf = 1.0;
    if (const auto c = entry.find("conf"); c != entry.end()) {
      if (!c->is_number()) malformed("jsonwords 'conf' must be numeric");
      conf = c->get<double>();
    }
    emit_word(words, t->get<std::string>(), bbox, conf);
  }
  return words;
}

Raster load_pgm(std::string_view payload) {
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < payload.size()) {
      const char c = payload[pos];
      if (c == '#') {
        while (pos < payload.size() && payload[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < payload.size() &&
           !std::isspace(static_cast<unsigned char>(payload[pos])) &&
           payload[pos] != '#') {
      ++pos;
    }
    return std::string(payload.substr(start, pos - start));
  };
  const std::string magic = next_token();
  if (magic != "P2" && magic != "P5") malformed_image("not a PGM file");
  int width = 0;
  int height = 0;
  int maxval = 0;
  if (!parse_int(next_token(), width) || !parse_int(next_token(), height) ||
      !parse_int(next_token(), maxval)) {
    malformed_image("truncated PGM header");
  }
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
    malformed_image("invalid PGM dimensions or maxval");
  }
  const std::size_t count = static_cast<std::size_t>(width) * height;
  Raster r{width, height, std::vector<std::uint8_t>(count)};
  auto scale = [maxval](int v) -> std::uint8_t {
    if (v > maxval) malformed_image("PGM sample exceeds maxval");
    if (maxval == 255) return static_cast<std::uint8_t>(v);
    return static_cast<std::uint8_t>(std::lround(v * 255.0 / maxval));
  };
  if (magic == "P2") {
    for (std::size_t i = 0; i < count; ++i) {
      int v = 0;
      if (!parse_int(next_token(), v) || v < 0) malformed_image("truncated PGM data");
      r.pixels[i] = scale(v);
    }
  } else {
    ++pos;  // exactly one whitespace byte separates header and raster
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    if (pos > payload.size() || payload.size() - pos < count * bytes_per) {
      malformed_image("truncated PGM data");
    }
    for (std::size_t i = 0; i < count; ++i) {
      int v = static_cast<unsigned char>(payload[pos + i * bytes_per]);
      if (bytes_per == 2) {
        v = (v << 8) | static_cast<unsigned char>(payload[pos + i * 2 + 1]);
      }
      r.pixels[i] = scale(v);
    }
  }
  return r;
}

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint8_t>(
      std::lround(0.299 * r + 0.587 * g + 0.114 * b));
}

Raster load_png(std::string_view payload) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, payload.data(), payload.size())) {
    malformed_image(std::string("cannot read PNG: ") + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  // Alpha is ignored; color is reduced with BT.601 luma on the stored values.
  image.format = color ? PNG_FORMAT_RGBA : PNG_FORMAT_GA;
  const int channels = color ? 4 : 2;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    malformed_image("cannot decode PNG: " + msg);
  }
  Raster r{static_cast<int>(image.width), static_cast<int>(image.height), {}};
  const std::size_t count = static_cast<std::size_t>(r.width) * r.height;
  r.pixels.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint8_t* px = buffer.data() + i * channels;
    r.pixels[i] = color ? luma(px[0], px[1], px[2]) : px[0];
  }
  return r;
}

}  // namespace

OcrFormat parse_ocr_format(std::string_view name) {
  const std::string n = to_lower_ascii(name);
  if (n == "tsv") return OcrFormat::kTsv;
  if (n == "hocr") return OcrFormat::kHocr;
  if (n == "jsonwords" || n == "json") return OcrFormat::kJsonWords;
  throw Error(ErrorCode::kUnsupportedFormat,
              "unsupported OCR format: " + std::string(name));
}

std::string_view ocr_format_name(OcrFormat format) {
  switch (format) {
    case OcrFormat::kTsv: return "tsv";
    case OcrFormat::kHocr: return "hocr";
    case OcrFormat::kJsonWords: return "jsonwords";
  }
  return "unknown";
}

ImageFormat parse_image_format(std::string_view name) {
  const std::string n = to_lower_ascii(name);
  if (n == "pgm") return ImageFormat::kPgm;
  if (n == "png") return ImageFormat::kPng;
  throw Error(ErrorCode::kUnsupportedFormat,
              "unsupported image format: " + std::string(name));
}

ImageFormat detect_image_format(std::string_view payload) {
  if (payload.size() >= 8 && payload.substr(0, 8) == "\x89PNG\r\n\x1a\n") {
    return ImageFormat::kPng;
  }
  if (payload.size() >= 2 && payload[0] == 'P' &&
      (payload[1] == '2' || payload[1] == '5')) {
    return ImageFormat::kPgm;
  }
  malformed_image("unrecognized image signature");
}

std::vector<Word> parse_ocr_words(std::string_view payload, OcrFormat format) {
  if (trim(payload).empty()) return {};
  std::vector<Word> words;
  switch (format) {
    case OcrFormat::kTsv: words = parse_tsv(payload); break;
    case OcrFormat::kHocr: words = parse_hocr(payload); break;
    case OcrFormat::kJsonWords: words = parse_jsonwords(payload); break;
  }
  std::stable_sort(words.begin(), words.end(), [](const Word& a, const Word& b) {
    if (a.bbox.y0 != b.bbox.y0) return a.bbox.y0 < b.bbox.y0;
    return a.bbox.x0 < b.bbox.x0;
  });
  for (std::size_t i = 0; i < words.size(); ++i) {
    words[i].word_id = static_cast<int>(i);
  }
  return words;
}

std::string words_to_jsonwords(const std::vector<Word>& words) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Word& w : words) {
    arr.push_back({{"t", w.text},
                   {"x0", w.bbox.x0},
                   {"y0", w.bbox.y0},
                   {"x1", w.bbox.x1},
                   {"y1", w.bbox.y1},
                   {"conf", w.confidence}});
  }
  return arr.dump();
}

Raster load_raster(std::string_view payload, ImageFormat format) {
  if (payload.empty()) malformed_image("empty image payload");
  return format == ImageFormat::kPgm ? load_pgm(payload) : load_png(payload);
}

std::string encode_pgm(const Raster& raster) {
  std::string out = "P5\n" + std::to_string(raster.width) + " " +
                    std::to_string(raster.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(raster.pixels.data()),
             raster.pixels.size());
  return out;
}

std::string encode_png(const Raster& raster) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width);
  image.height = static_cast<png_uint_32>(raster.height);
  image.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, raster.pixels.data(),
                                 0, nullptr)) {
    throw Error(ErrorCode::kIoError, std::string("PNG encode failed: ") + image.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&image, out.data(), &size, 0,
                                 raster.pixels.data(), 0, nullptr)) {
    throw Error(ErrorCode::kIoError, std::string("PNG encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

int otsu_threshold(const Raster& raster) {
  std::array<std::uint64_t, 256> hist{};
  for (std::uint8_t p : raster.pixels) ++hist[p];
  const double total = static_cast<double>(raster.pixels.size());
  if (total == 0) return 0;
  double sum_all = 0;
  for (int i = 0; i < 256; ++i) sum_all += static_cast<double>(i) * hist[i];

  int best_t = 0;
  double best_var = 0.0;
  double weight_below = 0;
  double sum_below = 0;
  // t is the first intensity that is NOT ink.
  for (int t = 1; t < 256; ++t) {
    weight_below += static_cast<double>(hist[t - 1]);
    sum_below += static_cast<double>(t - 1) * hist[t - 1];
    const double weight_above = total - weight_below;
    if (weight_below == 0 || weight_above == 0) continue;
    const double mean_below = sum_below / weight_below;
    const double mean_above = (sum_all - sum_below) / weight_above;
    const double diff = mean_below - mean_above;
    const double var = weight_below * weight_above * diff * diff;
    if (var > best_var * (1.0 + 1e-12)) {
      best_var = var;
      best_t = t;
    }
  }
  return best_t;
}

BinaryRaster binarize(const Raster& raster, Threshold threshold) {
  const int t = threshold.method == Threshold::Method::kOtsu
                    ? otsu_threshold(raster)
                    : threshold.value;
  BinaryRaster out(raster.width, raster.height);
  for (std::size_t i = 0; i < raster.pixels.size(); ++i) {
    out.ink[i] = raster.pixels[i] < t;
  }
  return out;
}

RawDocument ingest_document(std::string doc_id, std::string_view ocr_payload,
                            OcrFormat format,
                            std::optional<std::string_view> raster_payload,
                            const EngineConfig& /*config*/) {
  RawDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.words = parse_ocr_words(ocr_payload, format);
  if (raster_payload) {
    doc.raster = load_raster(*raster_payload, detect_image_format(*raster_payload));
    doc.page_size = {doc.raster->width, doc.raster->height};
  } else {
    int w = 0;
    int h = 0;
    for (const Word& word : doc.words) {
      w = std::max(w, word.bbox.x1 + 1);
      h = std::max(h, word.bbox.y1 + 1);
    }
    doc.page_size = {w, h};
  }
  for (const Word& word : doc.words) {
    if (word.bbox.x0 < 0 || word.bbox.y0 < 0 ||
        word.bbox.x1 > doc.page_size.width ||
        word.bbox.y1 > doc.page_size.height) {
      malformed("word '" + word.text + "' lies outside the page (" +
                std::to_string(doc.page_size.width) + "x" +
                std::to_string(doc.page_size.height) + ")");
    }
  }
  return doc;
}

}  // namespace docrelate
