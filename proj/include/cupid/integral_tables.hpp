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

#include "cupid/frame.hpp"
#include "cupid/geometry.hpp"

namespace cupid {

struct RegionMoments {
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  std::int64_t area = 0;
};

// Summed-area tables of samples and squared samples, one pair per channel.
// Entry (x, y) holds the sum over [0, x) x [0, y); tables are
// (plane_width + 1) x (plane_height + 1).
class IntegralTables {
 public:
  explicit IntegralTables(const Frame& frame);

  int channels() const { return static_cast<int>(planes_.size()); }
  int width(int channel = 0) const { return planes_.at(channel).width; }
  int height(int channel = 0) const { return planes_.at(channel).height; }

  RegionMoments moments(const Cuboid& region, int channel = 0) const;

  // Raw table entry, mostly for tests.
  std::uint64_t sum_at(int channel, int x, int y) const;
  std::uint64_t sum_sq_at(int channel, int x, int y) const;

 private:
  struct Plane {
    int width = 0;
    int height = 0;
    std::vector<std::uint64_t> sum;
    std::vector<std::uint64_t> sum_sq;
    std::size_t index(int x, int y) const {
      return static_cast<std::size_t>(y) * (width + 1) + x;
    }
  };
  std::vector<Plane> planes_;
};

// SSE of a region around its own mean: sum(p^2) - sum(p)^2 / area. The
// numerator is formed exactly in 128-bit integers before the single division.
double region_sse(const IntegralTables& tables, const Cuboid& region,
                  int channel = 0);

}  // namespace cupid
