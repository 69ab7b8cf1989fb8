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

#include <algorithm>
#include <deque>

#include "docrelate/error.h"
#include "docrelate/ingest.h"

namespace docrelate {

namespace {

// One erosion pass along a single axis using running counts of background.
BinaryRaster erode_axis(const BinaryRaster& b, int radius, bool horizontal) {
  BinaryRaster out(b.width, b.height);
  const int outer = horizontal ? b.height : b.width;
  const int inner = horizontal ? b.width : b.height;
  std::vector<int> background_prefix(static_cast<std::size_t>(inner) + 1);
  for (int o = 0; o < outer; ++o) {
    for (int i = 0; i < inner; ++i) {
      const bool ink = horizontal ? b.at(i, o) : b.at(o, i);
      background_prefix[i + 1] = background_prefix[i] + (ink ? 0 : 1);
    }
    for (int i = 0; i < inner; ++i) {
      const int lo = std::max(0, i - radius);
      const int hi = std::min(inner - 1, i + radius);
      const bool all_ink = background_prefix[hi + 1] == background_prefix[lo];
      if (horizontal) {
        out.set(i, o, all_ink);
      } else {
        out.set(o, i, all_ink);
      }
    }
  }
  return out;
}

std::int64_t filled_area_of(const ConnectedComponent& c, int raster_width,
                            Connectivity connectivity) {
  const int bw = c.bbox.width();
  const int bh = c.bbox.height();
  const int pw = bw + 2;
  const int ph = bh + 2;
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(pw) * ph, 0);
  for (std::uint32_t p : c.pixels) {
    const int x = static_cast<int>(p % raster_width) - c.bbox.x0 + 1;
    const int y = static_cast<int>(p / raster_width) - c.bbox.y0 + 1;
    grid[static_cast<std::size_t>(y) * pw + x] = 1;
  }
  // Background is traced from outside the bbox with the dual connectivity.
  const bool eight_bg = connectivity == Connectivity::kFour;
  std::deque<int> queue{0};
  grid[0] = 2;
  std::int64_t reached_inside = 0;
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    const int cx = cur % pw;
    const int cy = cur / pw;
    if (cx >= 1 && cx <= bw && cy >= 1 && cy <= bh) ++reached_inside;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        if (!eight_bg && dx != 0 && dy != 0) continue;
        const int nx = cx + dx;
        const int ny = cy + dy;
        if (nx < 0 || ny < 0 || nx >= pw || ny >= ph) continue;
        auto& cell = grid[static_cast<std::size_t>(ny) * pw + nx];
        if (cell != 0) continue;
        cell = 2;
        queue.push_back(ny * pw + nx);
      }
    }
  }
  return static_cast<std::int64_t>(bw) * bh - reached_inside;
}

}  // namespace

BinaryRaster erode(const BinaryRaster& b, int k) {
  if (k < 1 || k % 2 == 0) {
    throw Error(ErrorCode::kBadKernel,
                "erosion kernel must be odd and >= 1, got " + std::to_string(k));
  }
  if (k == 1 || b.width == 0 || b.height == 0) return b;
  const int radius = k / 2;
  return erode_axis(erode_axis(b, radius, true), radius, false);
}

BinaryRaster invert(const BinaryRaster& b) {
  BinaryRaster out(b.width, b.height);
  for (std::size_t i = 0; i < b.ink.size(); ++i) out.ink[i] = !b.ink[i];
  return out;
}

std::vector<ConnectedComponent> connected_components(const BinaryRaster& b,
                                                     Connectivity connectivity) {
  const int w = b.width;
  const int h = b.height;
  std::vector<std::int32_t> label(static_cast<std::size_t>(w) * h, -1);
  std::vector<ConnectedComponent> comps;
  std::vector<std::uint32_t> stack;
  const bool eight = connectivity == Connectivity::kEight;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (!b.ink[idx] || label[idx] >= 0) continue;
      const auto id = static_cast<std::int32_t>(comps.size());
      ConnectedComponent c;
      c.bbox = {x, y, x + 1, y + 1};
      label[idx] = id;
      stack.assign(1, static_cast<std::uint32_t>(idx));
      while (!stack.empty()) {
        const std::uint32_t cur = stack.back();
        stack.pop_back();
        c.pixels.push_back(cur);
        const int cx = static_cast<int>(cur % w);
        const int cy = static_cast<int>(cur / w);
        c.bbox = bbox_union(c.bbox, {cx, cy, cx + 1, cy + 1});
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            if (!eight && dx != 0 && dy != 0) continue;
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
            if (!b.ink[n] || label[n] >= 0) continue;
            label[n] = id;
            stack.push_back(static_cast<std::uint32_t>(n));
          }
        }
      }
      std::sort(c.pixels.begin(), c.pixels.end());
      c.area = static_cast<std::int64_t>(c.pixels.size());
      c.filled_area = filled_area_of(c, w, connectivity);
      comps.push_back(std::move(c));
    }
  }
  std::stable_sort(comps.begin(), comps.end(),
                   [](const ConnectedComponent& a, const ConnectedComponent& c) {
                     if (a.bbox.y0 != c.bbox.y0) return a.bbox.y0 < c.bbox.y0;
                     return a.bbox.x0 < c.bbox.x0;
                   });
  return comps;
}

bool is_box_component(const ConnectedComponent& c, const EngineConfig& config) {
  const double bbox_area = static_cast<double>(c.bbox.area());
  if (bbox_area <= 0) return false;
  return static_cast<double>(c.filled_area) / bbox_area >= config.fill_min &&
         static_cast<double>(c.area) / bbox_area <= config.hollow_max &&
         c.bbox.width() >= config.min_box_w &&
         c.bbox.height() >= config.min_box_h;
}

std::vector<BoxRegion> detect_boxes(const Raster& raster,
                                    const EngineConfig& config) {
  const BinaryRaster ink = binarize(raster, Threshold::otsu());
  // Dilate the ink by eroding the page, then undo the growth of each bbox.
  const BinaryRaster thickened = invert(erode(invert(ink), config.erode_k));
  const int r = (config.erode_k - 1) / 2;
  std::vector<BoxRegion> boxes;
  for (const ConnectedComponent& c :
       connected_components(thickened, Connectivity::kEight)) {
    if (!is_box_component(c, config)) continue;
    BBox b = c.bbox;
    if (b.x0 > 0) b.x0 += r;
    if (b.y0 > 0) b.y0 += r;
    if (b.x1 < raster.width) b.x1 -= r;
    if (b.y1 < raster.height) b.y1 -= r;
    boxes.push_back({static_cast<int>(boxes.size()), b});
  }
  return boxes;
}

}  // namespace docrelate
