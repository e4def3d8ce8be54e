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

#include "cupid/motion.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "cupid/bit_io.hpp"
#include "cupid/parallel.hpp"

namespace cupid {

namespace {

int clamp_coord(int v, int size) { return std::clamp(v, 0, size - 1); }

// Candidate displacements ordered by the tie-break key, so a strict '<' on the
// cost keeps the preferred vector among equals.
std::vector<MotionVector> search_order(int range) {
  std::vector<MotionVector> out;
  out.reserve(static_cast<std::size_t>(2 * range + 1) * (2 * range + 1));
  for (int dy = -range; dy <= range; ++dy) {
    for (int dx = -range; dx <= range; ++dx) out.push_back({dx, dy});
  }
  std::stable_sort(out.begin(), out.end(), [](MotionVector a, MotionVector b) {
    const int la = std::abs(a.dx) + std::abs(a.dy);
    const int lb = std::abs(b.dx) + std::abs(b.dy);
    if (la != lb) return la < lb;
    if (a.dy != b.dy) return a.dy < b.dy;
    return a.dx < b.dx;
  });
  return out;
}

// Luma cost, abandoning the candidate once it exceeds `bound`.
std::uint64_t region_cost(const Frame& cur, const Frame& ref, const Cuboid& r,
                          MotionVector mv, MatchMetric metric, std::uint64_t bound) {
  const int width = cur.width();
  const int height = cur.height();
  const auto cp = cur.plane(0);
  const auto rp = ref.plane(0);
  const bool inside = r.x + mv.dx >= 0 && r.y + mv.dy >= 0 &&
                      r.right() + mv.dx <= width && r.bottom() + mv.dy <= height;
  std::uint64_t cost = 0;
  for (int y = r.y; y < r.bottom(); ++y) {
    const Sample* crow = cp.data() + static_cast<std::size_t>(y) * width;
    const Sample* rrow =
        rp.data() + static_cast<std::size_t>(clamp_coord(y + mv.dy, height)) * width;
    std::uint64_t row = 0;
    if (inside) {
      for (int x = r.x; x < r.right(); ++x) {
        const std::int64_t d = static_cast<std::int64_t>(crow[x]) - rrow[x + mv.dx];
        row += metric == MatchMetric::kSse ? static_cast<std::uint64_t>(d * d)
                                           : static_cast<std::uint64_t>(d < 0 ? -d : d);
      }
    } else {
      for (int x = r.x; x < r.right(); ++x) {
        const std::int64_t d =
            static_cast<std::int64_t>(crow[x]) - rrow[clamp_coord(x + mv.dx, width)];
        row += metric == MatchMetric::kSse ? static_cast<std::uint64_t>(d * d)
                                           : static_cast<std::uint64_t>(d < 0 ? -d : d);
      }
    }
    cost += row;
    if (cost > bound) return cost;
  }
  return cost;
}

}  // namespace

std::vector<Cuboid> fixed_block_grid(int width, int height, int block) {
  if (block < 1) throw std::invalid_argument("block size must be at least 1");
  if (width < 1 || height < 1) throw std::invalid_argument("frame size must be positive");
  std::vector<Cuboid> grid;
  for (int y = 0; y < height; y += block) {
    for (int x = 0; x < width; x += block) {
      grid.push_back(Cuboid{x, y, std::min(block, width - x), std::min(block, height - y)});
    }
  }
  return grid;
}

std::uint64_t match_cost(const Frame& current, const Frame& reference,
                         const Cuboid& region, MotionVector mv, MatchMetric metric) {
  if (!current.same_shape(reference)) {
    throw std::invalid_argument("match_cost: frame shapes differ");
  }
  if (!region.inside(current.width(), current.height())) {
    throw std::invalid_argument("match_cost: region out of bounds");
  }
  return region_cost(current, reference, region, mv, metric,
                     std::numeric_limits<std::uint64_t>::max());
}

MotionField estimate_motion(const Frame& current, const Frame& reference,
                            const std::vector<Cuboid>& regions,
                            const SearchConfig& config, int threads) {
  if (!current.same_shape(reference)) {
    throw std::invalid_argument("estimate_motion: frame shapes differ");
  }
  if (config.range < 0) throw std::invalid_argument("search range must be >= 0");
  if (!tiles_frame(regions, current.width(), current.height())) {
    throw std::invalid_argument("estimate_motion: regions do not tile the frame");
  }

  const auto order = search_order(config.range);
  MotionField field;
  field.regions = regions;
  field.vectors.resize(regions.size());
  field.costs.resize(regions.size());
  parallel_for(regions.size(), threads, [&](std::size_t i) {
    MotionVector best_mv = order.front();
    std::uint64_t best = region_cost(current, reference, regions[i], best_mv, config.metric,
                                     std::numeric_limits<std::uint64_t>::max());
    for (std::size_t k = 1; k < order.size() && best > 0; ++k) {
      const std::uint64_t cost =
          region_cost(current, reference, regions[i], order[k], config.metric, best);
      if (cost < best) {
        best = cost;
        best_mv = order[k];
      }
    }
    field.vectors[i] = best_mv;
    field.costs[i] = best;
  });
  return field;
}

Frame compensate(const Frame& reference, const MotionField& field) {
  if (field.vectors.size() != field.regions.size()) {
    throw std::invalid_argument("compensate: motion field lists differ in length");
  }
  Frame out(reference.width(), reference.height(), reference.channels(),
            reference.subsampling(), reference.bit_depth());
  for (int c = 0; c < reference.channels(); ++c) {
    const int pw = reference.plane_width(c);
    const int ph = reference.plane_height(c);
    const int shift = reference.plane_shift(c);
    for (std::size_t i = 0; i < field.regions.size(); ++i) {
      const Cuboid r = map_to_plane(reference, field.regions[i], c);
      // Integer division truncates toward zero.
      const int dx = field.vectors[i].dx / (1 << shift);
      const int dy = field.vectors[i].dy / (1 << shift);
      for (int y = r.y; y < r.bottom(); ++y) {
        const int sy = clamp_coord(y + dy, ph);
        for (int x = r.x; x < r.right(); ++x) {
          out.at(c, x, y) = reference.at(c, clamp_coord(x + dx, pw), sy);
        }
      }
    }
  }
  return out;
}

Residual residual(const Frame& current, const Frame& predicted) {
  if (!current.same_shape(predicted)) {
    throw std::invalid_argument("residual: frame shapes differ");
  }
  Residual res;
  res.planes.resize(current.channels());
  for (int c = 0; c < current.channels(); ++c) {
    const auto a = current.plane(c);
    const auto b = predicted.plane(c);
    auto& plane = res.planes[c];
    plane.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      plane[i] = static_cast<std::int32_t>(a[i]) - static_cast<std::int32_t>(b[i]);
    }
  }
  for (std::int32_t d : res.planes[0]) {
    res.sse += static_cast<std::uint64_t>(static_cast<std::int64_t>(d) * d);
  }
  res.psnr = psnr(current, predicted, ChannelPolicy::kLumaOnly);
  return res;
}

Frame reconstruct(const Frame& predicted, const Residual& res) {
  if (static_cast<int>(res.planes.size()) != predicted.channels()) {
    throw std::invalid_argument("reconstruct: residual has the wrong channel count");
  }
  Frame out = predicted;
  for (int c = 0; c < out.channels(); ++c) {
    auto plane = out.plane(c);
    if (res.planes[c].size() != plane.size()) {
      throw std::invalid_argument("reconstruct: residual plane size mismatch");
    }
    for (std::size_t i = 0; i < plane.size(); ++i) {
      plane[i] = static_cast<Sample>(
          std::clamp<std::int64_t>(plane[i] + std::int64_t{res.planes[c][i]}, 0,
                                   out.max_value()));
    }
  }
  return out;
}

std::uint64_t motion_bit_cost(std::size_t vectors, int range) {
  if (range < 0) throw std::invalid_argument("search range must be >= 0");
  return vectors * 2 * static_cast<std::uint64_t>(ceil_log2(2 * static_cast<std::uint64_t>(range) + 1));
}

std::uint64_t motion_bit_cost(const MotionField& field, const SearchConfig& config) {
  return motion_bit_cost(field.vectors.size(), config.range);
}

void write_motion_dump(std::ostream& out, const MotionField& field) {
  for (std::size_t i = 0; i < field.regions.size(); ++i) {
    const Cuboid& r = field.regions[i];
    out << r.x << ' ' << r.y << ' ' << r.w << ' ' << r.h << ' ' << field.vectors[i].dx
        << ' ' << field.vectors[i].dy << ' ' << field.costs[i] << '\n';
  }
}

}  // namespace cupid
