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

#ifndef DOCRELATE_RASTER_H_
#define DOCRELATE_RASTER_H_

#include <cstdint>
#include <vector>

namespace docrelate {

// Row-major 8-bit grayscale image.
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }

  friend bool operator==(const Raster&, const Raster&) = default;
};

// Row-major ink mask; true marks foreground.
struct BinaryRaster {
  int width = 0;
  int height = 0;
  std::vector<bool> ink;

  BinaryRaster() = default;
  BinaryRaster(int w, int h, bool value = false)
      : width(w), height(h), ink(static_cast<std::size_t>(w) * h, value) {}

  bool at(int x, int y) const {
    return ink[static_cast<std::size_t>(y) * width + x];
  }
  void set(int x, int y, bool v) {
    ink[static_cast<std::size_t>(y) * width + x] = v;
  }
  std::size_t ink_count() const {
    std::size_t n = 0;
    for (bool b : ink) n += b ? 1 : 0;
    return n;
  }

  friend bool operator==(const BinaryRaster&, const BinaryRaster&) = default;
};

}  // namespace docrelate

#endif  // DOCRELATE_RASTER_H_
