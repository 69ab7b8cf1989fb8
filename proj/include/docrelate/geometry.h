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

#ifndef DOCRELATE_GEOMETRY_H_
#define DOCRELATE_GEOMETRY_H_

#include <algorithm>
#include <cstdint>

namespace docrelate {

// Axis-aligned pixel rectangle, origin top-left, y growing downward.
// Half-open: covers columns [x0, x1) and rows [y0, y1).
struct BBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  std::int64_t area() const {
    return width() <= 0 || height() <= 0
               ? 0
               : static_cast<std::int64_t>(width()) * height();
  }
  bool valid() const { return x0 < x1 && y0 < y1; }

  friend bool operator==(const BBox&, const BBox&) = default;
};

inline BBox bbox_union(const BBox& a, const BBox& b) {
  return {std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1),
          std::max(a.y1, b.y1)};
}

inline std::int64_t intersection_area(const BBox& a, const BBox& b) {
  const std::int64_t w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const std::int64_t h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  return w > 0 && h > 0 ? w * h : 0;
}

// Signed extent of the shared rows; negative when the boxes are apart.
inline int vertical_overlap(const BBox& a, const BBox& b) {
  return std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
}

inline int horizontal_overlap(const BBox& a, const BBox& b) {
  return std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
}

inline bool contains(const BBox& outer, const BBox& inner) {
  return outer.x0 <= inner.x0 && outer.y0 <= inner.y0 &&
         inner.x1 <= outer.x1 && inner.y1 <= outer.y1;
}

}  // namespace docrelate

#endif  // DOCRELATE_GEOMETRY_H_
