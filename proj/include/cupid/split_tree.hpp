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
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "cupid/bit_io.hpp"
#include "cupid/geometry.hpp"

namespace cupid {

enum class SplitAxis : std::uint8_t {
  kVertical,    // offset counted from the left edge; children left, right
  kHorizontal,  // offset counted from the top edge; children top, bottom
};

// Children of `region` for a split; first is left/top.
std::pair<Cuboid, Cuboid> split_region(const Cuboid& region, SplitAxis axis,
                                       int offset);

// Position of a split in the candidate list of a w x h region: vertical
// offsets 1..w-1 first, then horizontal offsets 1..h-1.
int split_index(SplitAxis axis, int offset, int w);
std::pair<SplitAxis, int> split_from_index(int index, int w, int h);

// Binary tree of recursive splits over a width x height frame. Node 0 is the
// root; children are appended as splits are applied, so node indices follow
// creation order.
class SplitTree {
 public:
  struct Node {
    Cuboid region;
    bool is_split = false;
    SplitAxis axis = SplitAxis::kVertical;
    int offset = 0;
    int first = -1;   // left/top child
    int second = -1;  // right/bottom child
  };

  SplitTree() = default;
  SplitTree(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  // Splits leaf `node`; returns the index of the first child (the second is
  // that index + 1).
  int split(int node, SplitAxis axis, int offset);

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int index) const { return nodes_.at(index); }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int leaf_count() const { return (node_count() + 1) / 2; }
  int split_count() const { return node_count() - leaf_count(); }

  // Leaf regions in pre-order (left/top child first).
  std::vector<Cuboid> leaves() const;

  // Throws std::logic_error on a broken node-count identity, non-interior
  // offset or inconsistent child regions.
  void validate() const;

  // Structural equality: same dims and same pre-order sequence of
  // (type, axis, offset). Node creation order is ignored.
  friend bool operator==(const SplitTree& a, const SplitTree& b);

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Node> nodes_;
};

// Pre-order; per node one type bit (1 split, 0 leaf), then for splits the
// candidate index in ceil(log2(W + H - 2)) bits of the node's own region.
Bitstream encode_tree(const SplitTree& tree);

// Throws std::runtime_error on exhausted input or out-of-range index.
SplitTree decode_tree(const Bitstream& bits, int width, int height);

struct TreeBitCost {
  std::uint64_t bits = 0;          // exact encode_tree length
  std::uint64_t type_bits = 0;     // 2n - 1
  std::uint64_t index_bits = 0;    // sum of ceil(log2(W + H - 2))
  double fractional_index_bits = 0;  // same sum without the ceil
};

TreeBitCost tree_bit_cost(const SplitTree& tree);

// Worst case for n leaves on a width x height frame:
// (2n - 1) + (n - 1) * ceil(log2(width + height - 2)).
std::uint64_t tree_bit_bound(int n_leaves, int width, int height);

// File container: "CPSTREE1", then big-endian u32 width, height, bit count,
// then the payload bytes.
void write_tree_file(const std::filesystem::path& path, const SplitTree& tree);
SplitTree read_tree_file(const std::filesystem::path& path);

std::vector<std::uint8_t> serialize_tree(const SplitTree& tree);
SplitTree deserialize_tree(std::span<const std::uint8_t> data);

}  // namespace cupid
