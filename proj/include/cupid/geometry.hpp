// Copyright 2026 The Cupid Motion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

namespace cupid {

// Axis-aligned rectangle in pixel coordinates. Used both for partition leaves
// (cuboids) and for fixed-size blocks.
struct Cuboid {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  std::int64_t area() const { return static_cast<std::int64_t>(w) * h; }
  int right() const { return x + w; }
  int bottom() const { return y + h; }
  bool contains(int px, int py) const {
    return px >= x && px < x + w && py >= y && py < y + h;
  }
  bool inside(int width, int height) const {
    return w >= 1 && h >= 1 && x >= 0 && y >= 0 && x + w <= width &&
           y + h <= height;
  }

  friend bool operator==(const Cuboid&, const Cuboid&) = default;
};

// True when `regions` are disjoint, in bounds and cover the width x height
// frame exactly.
bool tiles_frame(const std::vector<Cuboid>& regions, int width, int height);

}  // namespace cupid
