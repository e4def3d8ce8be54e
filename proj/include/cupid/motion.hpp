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
#include <iosfwd>
#include <vector>

#include "cupid/frame.hpp"
#include "cupid/geometry.hpp"

namespace cupid {

// Reference position = current position + (dx, dy).
struct MotionVector {
  int dx = 0;
  int dy = 0;

  friend bool operator==(const MotionVector&, const MotionVector&) = default;
};

enum class MatchMetric { kSse, kSad };

// Out-of-frame reference samples are read from the nearest edge sample, i.e.
// the reference is treated as infinitely padded.
enum class EdgePolicy { kClamp };

struct SearchConfig {
  int range = 16;
  MatchMetric metric = MatchMetric::kSse;
  EdgePolicy edge_policy = EdgePolicy::kClamp;
};

struct MotionField {
  std::vector<Cuboid> regions;
  std::vector<MotionVector> vectors;
  std::vector<std::uint64_t> costs;  // luma matching cost per region

  std::size_t size() const { return regions.size(); }
};

// Row-major grid; right and bottom remainders become narrower blocks.
std::vector<Cuboid> fixed_block_grid(int width, int height, int block);

// Exhaustive integer-pel search over (2 * range + 1)^2 displacements on luma.
// Ties: smallest |dx| + |dy|, then smallest dy, then smallest dx. Regions are
// searched on up to `threads` workers; the result does not depend on it.
MotionField estimate_motion(const Frame& current, const Frame& reference,
                            const std::vector<Cuboid>& regions,
                            const SearchConfig& config = {}, int threads = 1);

// Matching cost of one region at one displacement.
std::uint64_t match_cost(const Frame& current, const Frame& reference,
                         const Cuboid& region, MotionVector mv, MatchMetric metric);

// Builds the prediction by copying displaced reference regions. Chroma of
// 4:2:0 frames uses the regions mapped onto the chroma grid and vectors halved
// toward zero.
Frame compensate(const Frame& reference, const MotionField& field);

struct Residual {
  std::vector<std::vector<std::int32_t>> planes;  // current - predicted
  std::uint64_t sse = 0;  // luma
  double psnr = 0;        // luma, predicted vs current
};

Residual residual(const Frame& current, const Frame& predicted);

// predicted + residual, clipped to the sample range.
Frame reconstruct(const Frame& predicted, const Residual& res);

// Fixed-width coding: 2 * ceil(log2(2 * range + 1)) bits per vector.
std::uint64_t motion_bit_cost(const MotionField& field, const SearchConfig& config);
std::uint64_t motion_bit_cost(std::size_t vectors, int range);

// Text dump, one "x y w h dx dy cost" line per region.
void write_motion_dump(std::ostream& out, const MotionField& field);

}  // namespace cupid
