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

#include "cupid/split_tree.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <stdexcept>
#include <string>

namespace cupid {

namespace {

constexpr char kMagic[8] = {'C', 'P', 'S', 'T', 'R', 'E', 'E', '1'};

int candidate_count(const Cuboid& r) { return r.w + r.h - 2; }

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  return (std::uint32_t{in[at]} << 24) | (std::uint32_t{in[at + 1]} << 16) |
         (std::uint32_t{in[at + 2]} << 8) | std::uint32_t{in[at + 3]};
}

}  // namespace

std::pair<Cuboid, Cuboid> split_region(const Cuboid& r, SplitAxis axis, int offset) {
  if (axis == SplitAxis::kVertical) {
    return {Cuboid{r.x, r.y, offset, r.h}, Cuboid{r.x + offset, r.y, r.w - offset, r.h}};
  }
  return {Cuboid{r.x, r.y, r.w, offset}, Cuboid{r.x, r.y + offset, r.w, r.h - offset}};
}

int split_index(SplitAxis axis, int offset, int w) {
  return axis == SplitAxis::kVertical ? offset - 1 : (w - 1) + (offset - 1);
}

std::pair<SplitAxis, int> split_from_index(int index, int w, int h) {
  if (index < 0 || index >= w + h - 2) {
    throw std::out_of_range("split index out of range");
  }
  if (index < w - 1) return {SplitAxis::kVertical, index + 1};
  return {SplitAxis::kHorizontal, index - (w - 1) + 1};
}

SplitTree::SplitTree(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("split tree dimensions must be positive");
  }
  nodes_.push_back(Node{Cuboid{0, 0, width, height}});
}

int SplitTree::split(int index, SplitAxis axis, int offset) {
  Node& n = nodes_.at(index);
  if (n.is_split) throw std::logic_error("node is already split");
  const int extent = axis == SplitAxis::kVertical ? n.region.w : n.region.h;
  if (offset < 1 || offset > extent - 1) {
    throw std::invalid_argument("split offset must be strictly interior");
  }
  auto [first, second] = split_region(n.region, axis, offset);
  n.is_split = true;
  n.axis = axis;
  n.offset = offset;
  n.first = node_count();
  n.second = n.first + 1;
  const int first_index = n.first;
  nodes_.push_back(Node{first});  // invalidates n
  nodes_.push_back(Node{second});
  return first_index;
}

std::vector<Cuboid> SplitTree::leaves() const {
  std::vector<Cuboid> out;
  if (nodes_.empty()) return out;
  out.reserve(leaf_count());
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node& n = nodes_[stack.back()];
    stack.pop_back();
    if (n.is_split) {
      stack.push_back(n.second);
      stack.push_back(n.first);
    } else {
      out.push_back(n.region);
    }
  }
  return out;
}

void SplitTree::validate() const {
  if (nodes_.empty()) throw std::logic_error("split tree has no root");
  int leaves = 0;
  int splits = 0;
  for (const Node& n : nodes_) {
    if (!n.is_split) {
      ++leaves;
      continue;
    }
    ++splits;
    const int extent = n.axis == SplitAxis::kVertical ? n.region.w : n.region.h;
    if (n.offset < 1 || n.offset > extent - 1) {
      throw std::logic_error("split offset not strictly interior");
    }
    auto [first, second] = split_region(n.region, n.axis, n.offset);
    if (nodes_.at(n.first).region != first || nodes_.at(n.second).region != second) {
      throw std::logic_error("child regions do not match the parent split");
    }
  }
  if (splits != leaves - 1 || node_count() != 2 * leaves - 1) {
    throw std::logic_error("split tree violates the 2n - 1 node identity");
  }
}

bool operator==(const SplitTree& a, const SplitTree& b) {
  if (a.width_ != b.width_ || a.height_ != b.height_ ||
      a.nodes_.size() != b.nodes_.size()) {
    return false;
  }
  if (a.nodes_.empty()) return true;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [ia, ib] = stack.back();
    stack.pop_back();
    const auto& na = a.nodes_[ia];
    const auto& nb = b.nodes_[ib];
    if (na.is_split != nb.is_split || na.region != nb.region) return false;
    if (!na.is_split) continue;
    if (na.axis != nb.axis || na.offset != nb.offset) return false;
    stack.emplace_back(na.second, nb.second);
    stack.emplace_back(na.first, nb.first);
  }
  return true;
}

Bitstream encode_tree(const SplitTree& tree) {
  BitWriter writer;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const auto& n = tree.node(stack.back());
    stack.pop_back();
    writer.put_bit(n.is_split);
    if (!n.is_split) continue;
    writer.put_bits(static_cast<std::uint32_t>(split_index(n.axis, n.offset, n.region.w)),
                    ceil_log2(candidate_count(n.region)));
    stack.push_back(n.second);
    stack.push_back(n.first);
  }
  return writer.take();
}

SplitTree decode_tree(const Bitstream& bits, int width, int height) {
  SplitTree tree(width, height);
  BitReader reader(bits);
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int index = stack.back();
    stack.pop_back();
    if (!reader.get_bit()) continue;
    const Cuboid region = tree.node(index).region;
    const int candidates = candidate_count(region);
    if (candidates < 1) {
      throw std::runtime_error("split flag set on a 1x1 region at bit " +
                               std::to_string(reader.position() - 1));
    }
    const auto code = static_cast<int>(reader.get_bits(ceil_log2(candidates)));
    if (code >= candidates) {
      throw std::runtime_error("split index " + std::to_string(code) +
                               " out of range for a " + std::to_string(region.w) +
                               "x" + std::to_string(region.h) + " region");
    }
    auto [axis, offset] = split_from_index(code, region.w, region.h);
    const int first = tree.split(index, axis, offset);
    stack.push_back(first + 1);
    stack.push_back(first);
  }
  if (reader.remaining() != 0) {
    throw std::runtime_error("trailing bits after the split tree");
  }
  return tree;
}

TreeBitCost tree_bit_cost(const SplitTree& tree) {
  TreeBitCost cost;
  for (const auto& n : tree.nodes()) {
    ++cost.type_bits;
    if (!n.is_split) continue;
    const int c = candidate_count(n.region);
    cost.index_bits += ceil_log2(c);
    cost.fractional_index_bits += std::log2(static_cast<double>(c));
  }
  cost.bits = cost.type_bits + cost.index_bits;
  return cost;
}

std::uint64_t tree_bit_bound(int n_leaves, int width, int height) {
  const std::uint64_t n = n_leaves;
  return (2 * n - 1) + (n - 1) * ceil_log2(static_cast<std::uint64_t>(width) + height - 2);
}

std::vector<std::uint8_t> serialize_tree(const SplitTree& tree) {
  const Bitstream bits = encode_tree(tree);
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, static_cast<std::uint32_t>(tree.width()));
  put_u32(out, static_cast<std::uint32_t>(tree.height()));
  put_u32(out, static_cast<std::uint32_t>(bits.bit_count));
  out.insert(out.end(), bits.bytes.begin(), bits.bytes.end());
  return out;
}

SplitTree deserialize_tree(std::span<const std::uint8_t> data) {
  if (data.size() < 20 || !std::equal(std::begin(kMagic), std::end(kMagic), data.begin())) {
    throw std::runtime_error("not a split-tree stream (bad magic or short header)");
  }
  const auto width = get_u32(data, 8);
  const auto height = get_u32(data, 12);
  Bitstream bits;
  bits.bit_count = get_u32(data, 16);
  const std::size_t payload = (bits.bit_count + 7) / 8;
  if (data.size() != 20 + payload) {
    throw std::runtime_error("split-tree payload length does not match its bit count");
  }
  bits.bytes.assign(data.begin() + 20, data.end());
  if (bits.bit_count % 8 != 0 &&
      (bits.bytes.back() & (0xFFu >> (bits.bit_count % 8))) != 0) {
    throw std::runtime_error("split-tree pad bits are not zero");
  }
  if (width == 0 || height == 0 || width > (1u << 30) || height > (1u << 30)) {
    throw std::runtime_error("split-tree header has invalid dimensions");
  }
  return decode_tree(bits, static_cast<int>(width), static_cast<int>(height));
}

void write_tree_file(const std::filesystem::path& path, const SplitTree& tree) {
  const auto data = serialize_tree(tree);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
}

SplitTree read_tree_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return deserialize_tree(data);
}

}  // namespace cupid
