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

#include "cupid/integral_tables.hpp"

#include <stdexcept>

namespace cupid {

IntegralTables::IntegralTables(const Frame& frame) {
  planes_.resize(frame.channels());
  for (int c = 0; c < frame.channels(); ++c) {
    Plane& p = planes_[c];
    p.width = frame.plane_width(c);
    p.height = frame.plane_height(c);
    const std::size_t n = static_cast<std::size_t>(p.width + 1) * (p.height + 1);
    p.sum.assign(n, 0);
    p.sum_sq.assign(n, 0);
    const auto samples = frame.plane(c);
    for (int y = 0; y < p.height; ++y) {
      std::uint64_t row = 0;
      std::uint64_t row_sq = 0;
      for (int x = 0; x < p.width; ++x) {
        const std::uint64_t v = samples[static_cast<std::size_t>(y) * p.width + x];
        row += v;
        row_sq += v * v;
        p.sum[p.index(x + 1, y + 1)] = p.sum[p.index(x + 1, y)] + row;
        p.sum_sq[p.index(x + 1, y + 1)] = p.sum_sq[p.index(x + 1, y)] + row_sq;
      }
    }
  }
}

RegionMoments IntegralTables::moments(const Cuboid& region, int channel) const {
  const Plane& p = planes_.at(channel);
  if (!region.inside(p.width, p.height)) {
    throw std::invalid_argument("integral table query out of bounds");
  }
  const auto a = p.index(region.x, region.y);
  const auto b = p.index(region.right(), region.y);
  const auto c = p.index(region.x, region.bottom());
  const auto d = p.index(region.right(), region.bottom());
  // Unsigned wrap-around cancels exactly.
  return RegionMoments{p.sum[d] - p.sum[b] - p.sum[c] + p.sum[a],
                       p.sum_sq[d] - p.sum_sq[b] - p.sum_sq[c] + p.sum_sq[a],
                       region.area()};
}

std::uint64_t IntegralTables::sum_at(int channel, int x, int y) const {
  const Plane& p = planes_.at(channel);
  return p.sum.at(p.index(x, y));
}

std::uint64_t IntegralTables::sum_sq_at(int channel, int x, int y) const {
  const Plane& p = planes_.at(channel);
  return p.sum_sq.at(p.index(x, y));
}

double region_sse(const IntegralTables& tables, const Cuboid& region, int channel) {
  const RegionMoments m = tables.moments(region, channel);
  const __int128 num = static_cast<__int128>(m.area) * m.sum_sq -
                       static_cast<__int128>(m.sum) * m.sum;
  return static_cast<double>(static_cast<long double>(num) / m.area);
}

}  // namespace cupid
