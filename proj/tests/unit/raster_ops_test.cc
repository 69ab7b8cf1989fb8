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

#include "docrelate/raster_ops.h"

#include <deque>

#include "docrelate/error.h"
#include "docrelate/ingest.h"
#include "doctest.h"
#include "fixtures.h"
#include "generators.h"

using namespace docrelate;
using docrelate::testing::Rng;
using docrelate::testing::uniform;

namespace {

BinaryRaster from_rows(const std::vector<std::string>& rows) {
  BinaryRaster b(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int y = 0; y < b.height; ++y) {
    for (int x = 0; x < b.width; ++x) b.set(x, y, rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] == '#');
  }
  return b;
}

Raster shifted(const Raster& r, int dx, int dy, std::uint8_t fill) {
  Raster out{r.width + dx, r.height + dy, {}};
  out.pixels.assign(static_cast<std::size_t>(out.width) * out.height, fill);
  for (int y = 0; y < r.height; ++y) {
    for (int x = 0; x < r.width; ++x) {
      out.pixels[static_cast<std::size_t>(y + dy) * out.width + x + dx] = r.at(x, y);
    }
  }
  return out;
}

struct Measured {
  BBox bbox;
  std::int64_t area = 0;
  std::int64_t filled = 0;
};

// Flood-fills the thickened ink from `seed` and measures the component with
// background traced 4-connected from outside its bbox.
Measured measure(const BinaryRaster& ink, int seed_x, int seed_y) {
  const int w = ink.width;
  std::vector<char> in(ink.ink.size(), 0);
  std::deque<std::pair<int, int>> q{{seed_x, seed_y}};
  in[static_cast<std::size_t>(seed_y * w + seed_x)] = 1;
  Measured m{{seed_x, seed_y, seed_x + 1, seed_y + 1}, 0, 0};
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop_front();
    ++m.area;
    m.bbox = bbox_union(m.bbox, {x, y, x + 1, y + 1});
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= ink.height) continue;
        const auto i = static_cast<std::size_t>(ny * w + nx);
        if (ink.ink[i] && !in[i]) {
          in[i] = 1;
          q.push_back({nx, ny});
        }
      }
    }
  }
  const BBox& b = m.bbox;
  std::vector<char> outside(ink.ink.size(), 0);
  std::deque<std::pair<int, int>> bg;
  for (int y = b.y0; y < b.y1; ++y) {
    for (int x = b.x0; x < b.x1; ++x) {
      const bool edge = x == b.x0 || y == b.y0 || x == b.x1 - 1 || y == b.y1 - 1;
      const auto i = static_cast<std::size_t>(y * w + x);
      if (edge && !in[i]) {
        outside[i] = 1;
        bg.push_back({x, y});
      }
    }
  }
  std::int64_t reached = static_cast<std::int64_t>(bg.size());
  while (!bg.empty()) {
    auto [x, y] = bg.front();
    bg.pop_front();
    const int d[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& s : d) {
      const int nx = x + s[0];
      const int ny = y + s[1];
      if (nx < b.x0 || ny < b.y0 || nx >= b.x1 || ny >= b.y1) continue;
      const auto i = static_cast<std::size_t>(ny * w + nx);
      if (!in[i] && !outside[i]) {
        outside[i] = 1;
        ++reached;
        bg.push_back({nx, ny});
      }
    }
  }
  m.filled = b.area() - reached;
  return m;
}

}  // namespace

TEST_SUITE("raster_ops") {
  TEST_CASE("erosion shrinks a block to its core") {
    const BinaryRaster b = from_rows({".....", ".###.", ".###.", ".###.", "....."});
    const BinaryRaster e = erode(b, 3);
    CHECK(e.ink_count() == 1);
    CHECK(e.at(2, 2));
    CHECK(erode(b, 1) == b);
    // The window is clipped at the raster edge, so a full raster survives.
    const BinaryRaster full(4, 3, true);
    CHECK(erode(full, 5) == full);
  }

  TEST_CASE("kernel must be odd and positive") {
    const BinaryRaster b(3, 3, true);
    for (int k : {0, 2, -1, 4}) {
      try {
        erode(b, k);
        FAIL("expected BadKernel");
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kBadKernel);
      }
    }
  }

  TEST_CASE("invert flips every pixel") {
    const BinaryRaster b = from_rows({"#.", ".#"});
    CHECK(invert(b) == from_rows({".#", "#."}));
    CHECK(invert(invert(b)) == b);
  }

  TEST_CASE("connectivity decides whether diagonals join") {
    const BinaryRaster b = from_rows({"#...", ".#..", "...#"});
    CHECK(connected_components(b, Connectivity::kEight).size() == 2);
    CHECK(connected_components(b, Connectivity::kFour).size() == 3);
  }

  TEST_CASE("ring component reports its enclosed hole") {
    const BinaryRaster b = from_rows({"......", ".####.", ".#..#.", ".#..#.", ".####.", "......",
                                      "##...."});
    const auto cs = connected_components(b, Connectivity::kEight);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].bbox == BBox{1, 1, 5, 5});
    CHECK(cs[0].area == 12);
    CHECK(cs[0].filled_area == 16);
    CHECK(cs[1].bbox == BBox{0, 6, 2, 7});
    CHECK(cs[1].filled_area == 2);
  }

  TEST_CASE("a diagonal gap leaks under 8-connected background") {
    // The outline is 4-connected ink, so its background is 8-connected and
    // escapes through the corner.
    const BinaryRaster b = from_rows({"####", "#..#", "#..#", "###."});
    const auto four = connected_components(b, Connectivity::kFour);
    REQUIRE(four.size() == 1);
    CHECK(four[0].filled_area == four[0].area);
  }

  TEST_CASE("box predicate thresholds") {
    const EngineConfig cfg;
    ConnectedComponent c;
    c.bbox = {0, 0, 100, 50};
    c.area = 1500;
    c.filled_area = 5000;
    CHECK(is_box_component(c, cfg));
    c.area = 1501;
    CHECK_FALSE(is_box_component(c, cfg));
    c.area = 1500;
    c.filled_area = 4749;
    CHECK_FALSE(is_box_component(c, cfg));
    c.filled_area = 4750;
    CHECK(is_box_component(c, cfg));
    c.bbox = {0, 0, 39, 50};
    c.area = 100;
    c.filled_area = c.bbox.area();
    CHECK_FALSE(is_box_component(c, cfg));
    c.bbox = {0, 0, 40, 19};
    c.filled_area = c.bbox.area();
    CHECK_FALSE(is_box_component(c, cfg));
  }

  TEST_CASE("fixture A has exactly the drawn remit box") {
    const RawDocument a = testing::fixture_raw("bank_a");
    const auto boxes = detect_boxes(*a.raster, EngineConfig{});
    REQUIRE(boxes.size() == 1);
    CHECK(boxes[0].box_id == 0);
    CHECK(boxes[0].bbox == BBox{96, 262, 320, 324});
  }

  TEST_CASE("synthetic pages: every rectangle within 2 px, no false positives") {
    Rng rng(31);
    for (int page = 0; page < 20; ++page) {
      const testing::BoxPage p = testing::make_box_page(rng);
      const auto boxes = detect_boxes(p.raster, EngineConfig{});
      CAPTURE(page);
      CHECK(boxes.size() == p.rects.size());
      for (const BBox& truth : p.rects) {
        bool found = false;
        for (const BoxRegion& b : boxes) {
          found = found || (std::abs(b.bbox.x0 - truth.x0) <= 2 && std::abs(b.bbox.y0 - truth.y0) <= 2 &&
                            std::abs(b.bbox.x1 - truth.x1) <= 2 && std::abs(b.bbox.y1 - truth.y1) <= 2);
        }
        CHECK(found);
      }
    }
  }

  TEST_CASE("detection is translation-equivariant") {
    Rng rng(32);
    for (int i = 0; i < 10; ++i) {
      const testing::BoxPage p = testing::make_box_page(rng);
      const int dx = uniform(rng, 1, 25);
      const int dy = uniform(rng, 1, 25);
      const auto base = detect_boxes(p.raster, EngineConfig{});
      const auto moved = detect_boxes(shifted(p.raster, dx, dy, p.raster.pixels[0]), EngineConfig{});
      REQUIRE(base.size() == moved.size());
      for (std::size_t k = 0; k < base.size(); ++k) {
        const BBox& a = base[k].bbox;
        CHECK(moved[k].bbox == BBox{a.x0 + dx, a.y0 + dy, a.x1 + dx, a.y1 + dy});
      }
    }
  }

  TEST_CASE("reported boxes pass the predicates when recomputed by brute force") {
    Rng rng(33);
    const EngineConfig cfg;
    const int r = (cfg.erode_k - 1) / 2;
    for (int i = 0; i < 20; ++i) {
      const testing::BoxPage p = testing::make_box_page(rng);
      const BinaryRaster ink = binarize(p.raster, Threshold::otsu());
      const BinaryRaster thick = invert(erode(invert(ink), cfg.erode_k));
      for (const BoxRegion& b : detect_boxes(p.raster, cfg)) {
        const BBox grown{b.bbox.x0 - r, b.bbox.y0 - r, b.bbox.x1 + r, b.bbox.y1 + r};
        int sx = grown.x0;
        while (sx < grown.x1 && !thick.at(sx, grown.y0)) ++sx;
        REQUIRE(sx < grown.x1);
        const Measured m = measure(thick, sx, grown.y0);
        CHECK(m.bbox == grown);
        const double a = static_cast<double>(m.bbox.area());
        CHECK(static_cast<double>(m.filled) / a >= cfg.fill_min);
        CHECK(static_cast<double>(m.area) / a <= cfg.hollow_max);
        CHECK(m.bbox.width() >= cfg.min_box_w);
        CHECK(m.bbox.height() >= cfg.min_box_h);
      }
    }
  }

  TEST_CASE("solid blobs and text are not boxes") {
    Raster r{200, 120, std::vector<std::uint8_t>(200 * 120, 240)};
    for (int y = 20; y < 80; ++y) {
      for (int x = 30; x < 150; ++x) r.pixels[static_cast<std::size_t>(y) * 200 + x] = 20;
    }
    CHECK(detect_boxes(r, EngineConfig{}).empty());
    const Raster blank{50, 50, std::vector<std::uint8_t>(2500, 255)};
    CHECK(detect_boxes(blank, EngineConfig{}).empty());
  }
}
