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

#include <iosfwd>
#include <optional>
#include <vector>

#include "cupid/frame.hpp"
#include "cupid/geometry.hpp"
#include "cupid/integral_tables.hpp"
#include "cupid/split_tree.hpp"

namespace cupid {

struct Split {
  SplitAxis axis = SplitAxis::kVertical;
  int offset = 0;
  double sse_after = 0;  // summed over the participating channels
  double sse_gain = 0;   // parent SSE minus sse_after, >= 0
};

// Channels that drive split decisions. Luma only under kLumaOnly, and also for
// 4:2:0 frames whose chroma planes do not share the luma grid.
std::vector<int> split_channels(const Frame& frame, ChannelPolicy policy);
std::vector<int> split_channels(const IntegralTables& tables, ChannelPolicy policy);

// Best of the (w - 1) vertical and (h - 1) horizontal splits of `region`.
// Ties go to vertical before horizontal, then to the smallest offset. Returns
// nullopt for a 1x1 region.
std::optional<Split> best_split(const IntegralTables& tables, const Cuboid& region,
                                ChannelPolicy policy = ChannelPolicy::kAllChannels);

// One greedy step: the region that was split and how.
struct SplitStep {
  Cuboid region;
  SplitAxis axis = SplitAxis::kVertical;
  int offset = 0;

  friend bool operator==(const SplitStep&, const SplitStep&) = default;
};

struct CuboidPartition {
  int width = 0;
  int height = 0;
  std::vector<Cuboid> cuboids;   // leaves in tree pre-order
  SplitTree tree;
  std::vector<SplitStep> steps;  // greedy order; empty for decoded trees
  double total_sse = 0;

  int size() const { return static_cast<int>(cuboids.size()); }
};

// Greedy partition into n_cuboids rectangles: repeatedly splits the cuboid
// whose best split has the largest SSE gain (ties: earliest created).
CuboidPartition partition(const Frame& frame, int n_cuboids,
                          ChannelPolicy policy = ChannelPolicy::kAllChannels);

// Rebuilds a partition from a decoded tree; total_sse is evaluated on `frame`.
CuboidPartition partition_from_tree(const Frame& frame, SplitTree tree,
                                    ChannelPolicy policy = ChannelPolicy::kAllChannels);

// Sum of region_sse over the cuboids and the split channels.
double partition_sse(const IntegralTables& tables, const std::vector<Cuboid>& cuboids,
                     ChannelPolicy policy = ChannelPolicy::kAllChannels);

// Fills every cuboid with its per-channel mean, rounded half away from zero.
// Chroma of 4:2:0 frames uses the cuboids mapped onto the chroma grid.
Frame coarsen(const Frame& frame, const CuboidPartition& partition);

// floor(width / block) * floor(height / block).
int cuboid_count_from_blocks(int width, int height, int block);

// Text dump: "# cuboids <n> total_sse <v>" then one "x y w h" line per cuboid.
void write_partition_dump(std::ostream& out, const CuboidPartition& partition);

struct PartitionDump {
  std::vector<Cuboid> cuboids;
  std::optional<double> total_sse;
};
PartitionDump read_partition_dump(std::istream& in);

}  // namespace cupid
