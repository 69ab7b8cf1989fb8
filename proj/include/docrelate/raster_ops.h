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

#ifndef DOCRELATE_RASTER_OPS_H_
#define DOCRELATE_RASTER_OPS_H_

#include <cstdint>
#include <vector>

#include "docrelate/config.h"
#include "docrelate/geometry.h"
#include "docrelate/raster.h"

namespace docrelate {

struct ConnectedComponent {
  // Linear pixel indices (y * width + x), ascending.
  std::vector<std::uint32_t> pixels;
  BBox bbox;
  std::int64_t area = 0;
  // area plus every enclosed background pixel inside bbox.
  std::int64_t filled_area = 0;
};

struct BoxRegion {
  int box_id = 0;
  BBox bbox;
  friend bool operator==(const BoxRegion&, const BoxRegion&) = default;
};

enum class Connectivity { kFour = 4, kEight = 8 };

// Morphological erosion of the ink set with a k x k window clipped to the
// raster. Throws BadKernel unless k is odd and positive.
BinaryRaster erode(const BinaryRaster& b, int k);

BinaryRaster invert(const BinaryRaster& b);

// Components ordered by (bbox.y0, bbox.x0), then by first pixel in raster
// scan order. Enclosed background is traced with the dual connectivity.
std::vector<ConnectedComponent> connected_components(const BinaryRaster& b,
                                                     Connectivity connectivity);

// True when a component passes the rectangle-outline test of detect_boxes.
bool is_box_component(const ConnectedComponent& c, const EngineConfig& config);

// Otsu binarization, background erosion, 8-connected labeling, then the
// outline test. Every passing component is reported, nested ones included.
std::vector<BoxRegion> detect_boxes(const Raster& raster,
                                    const EngineConfig& config);

}  // namespace docrelate

#endif  // DOCRELATE_RASTER_OPS_H_
