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

#include "cupid/partition.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>

#include "exact_ratio.hpp"

namespace cupid {

namespace {

using detail::Ratio;
using detail::Wide;

// area * SSE of a region, summed over channels; exact while it fits.
Wide scaled_sse(const IntegralTables& tables, const Cuboid& r,
                const std::vector<int>& channels) {
  Wide total = Wide::of(0);
  const Wide area = Wide::of(r.area());
  for (int c : channels) {
    const RegionMoments m = tables.moments(r, c);
    const Wide s = Wide::of_unsigned(m.sum);
    total = total + (area * Wide::of_unsigned(m.sum_sq) - s * s);
  }
  return total;
}

struct ExactSplit {
  SplitAxis axis = SplitAxis::kVertical;
  int offset = 0;
  Ratio sse_after;
  Ratio gain;
};

std::optional<ExactSplit> exact_best_split(const IntegralTables& tables,
                                           const Cuboid& region,
                                           const std::vector<int>& channels) {
  if (region.w == 1 && region.h == 1) return std::nullopt;

  std::optional<ExactSplit> best;
  auto consider = [&](SplitAxis axis, int offset) {
    auto [first, second] = split_region(region, axis, offset);
    const Wide a1 = Wide::of(first.area());
    const Wide a2 = Wide::of(second.area());
    const Wide n1 = scaled_sse(tables, first, channels);
    const Wide n2 = scaled_sse(tables, second, channels);
    Ratio after{n1 * a2 + n2 * a1, a1 * a2};
    if (!best || detail::compare(after, best->sse_after) < 0) {
      best = ExactSplit{axis, offset, after, {}};
    }
  };
  for (int off = 1; off < region.w; ++off) consider(SplitAxis::kVertical, off);
  for (int off = 1; off < region.h; ++off) consider(SplitAxis::kHorizontal, off);

  // gain = parent/ap - after.num/after.den over the common denominator.
  const Wide ap = Wide::of(region.area());
  const Wide np = scaled_sse(tables, region, channels);
  best->gain = Ratio{np * best->sse_after.den - ap * best->sse_after.num,
                     ap * best->sse_after.den};
  return best;
}

Split to_split(const ExactSplit& s) {
  const double gain = static_cast<double>(s.gain.value());
  return Split{s.axis, s.offset, static_cast<double>(s.sse_after.value()),
               gain < 0 ? 0.0 : gain};
}

void check_channels(const IntegralTables& tables, const std::vector<int>& channels) {
  for (int c : channels) {
    if (tables.width(c) != tables.width(0) || tables.height(c) != tables.height(0)) {
      throw std::invalid_argument("split channels must share the luma grid");
    }
  }
}

}  // namespace

std::vector<int> split_channels(const IntegralTables& tables, ChannelPolicy policy) {
  std::vector<int> out{0};
  if (policy == ChannelPolicy::kLumaOnly) return out;
  for (int c = 1; c < tables.channels(); ++c) {
    if (tables.width(c) == tables.width(0) && tables.height(c) == tables.height(0)) {
      out.push_back(c);
    }
  }
  return out;
}

std::vector<int> split_channels(const Frame& frame, ChannelPolicy policy) {
  std::vector<int> out{0};
  if (policy == ChannelPolicy::kLumaOnly || frame.subsampling() == Subsampling::k420) {
    return out;
  }
  for (int c = 1; c < frame.channels(); ++c) out.push_back(c);
  return out;
}

std::optional<Split> best_split(const IntegralTables& tables, const Cuboid& region,
                                ChannelPolicy policy) {
  if (!region.inside(tables.width(), tables.height())) {
    throw std::invalid_argument("best_split: region out of bounds");
  }
  const auto channels = split_channels(tables, policy);
  check_channels(tables, channels);
  auto s = exact_best_split(tables, region, channels);
  if (!s) return std::nullopt;
  return to_split(*s);
}

CuboidPartition partition(const Frame& frame, int n_cuboids, ChannelPolicy policy) {
  if (n_cuboids < 1) throw std::invalid_argument("n_cuboids must be at least 1");
  if (static_cast<std::int64_t>(n_cuboids) >
      static_cast<std::int64_t>(frame.width()) * frame.height()) {
    throw std::invalid_argument("n_cuboids exceeds the number of pixels");
  }
  const IntegralTables tables(frame);
  const auto channels = split_channels(tables, policy);

  CuboidPartition result;
  result.width = frame.width();
  result.height = frame.height();
  result.tree = SplitTree(frame.width(), frame.height());

  // Best split cached per leaf; only the two children of a split are
  // re-evaluated.
  struct Entry {
    int node;
    ExactSplit split;
  };
  auto lower_priority = [](const Entry& a, const Entry& b) {
    const int c = detail::compare(a.split.gain, b.split.gain);
    if (c != 0) return c < 0;
    return a.node > b.node;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower_priority)> queue(
      lower_priority);
  auto enqueue = [&](int node) {
    if (auto s = exact_best_split(tables, result.tree.node(node).region, channels)) {
      queue.push(Entry{node, *s});
    }
  };

  enqueue(0);
  result.steps.reserve(n_cuboids - 1);
  while (result.tree.leaf_count() < n_cuboids && !queue.empty()) {
    const Entry top = queue.top();
    queue.pop();
    result.steps.push_back(
        SplitStep{result.tree.node(top.node).region, top.split.axis, top.split.offset});
    const int first = result.tree.split(top.node, top.split.axis, top.split.offset);
    enqueue(first);
    enqueue(first + 1);
  }

  result.cuboids = result.tree.leaves();
  result.total_sse = partition_sse(tables, result.cuboids, policy);
  return result;
}

CuboidPartition partition_from_tree(const Frame& frame, SplitTree tree,
                                    ChannelPolicy policy) {
  if (tree.width() != frame.width() || tree.height() != frame.height()) {
    throw std::invalid_argument("split tree does not match the frame dimensions");
  }
  tree.validate();
  CuboidPartition result;
  result.width = frame.width();
  result.height = frame.height();
  result.cuboids = tree.leaves();
  result.tree = std::move(tree);
  result.total_sse = partition_sse(IntegralTables(frame), result.cuboids, policy);
  return result;
}

double partition_sse(const IntegralTables& tables, const std::vector<Cuboid>& cuboids,
                     ChannelPolicy policy) {
  const auto channels = split_channels(tables, policy);
  double total = 0;
  for (const Cuboid& r : cuboids) {
    for (int c : channels) total += region_sse(tables, r, c);
  }
  return total;
}

Frame coarsen(const Frame& frame, const CuboidPartition& partition) {
  if (partition.width != frame.width() || partition.height != frame.height()) {
    throw std::invalid_argument("coarsen: partition does not match the frame dimensions");
  }
  Frame out = frame;
  const IntegralTables tables(frame);
  for (int c = 0; c < frame.channels(); ++c) {
    for (const Cuboid& luma : partition.cuboids) {
      const Cuboid r = map_to_plane(frame, luma, c);
      if (r.w <= 0 || r.h <= 0) continue;
      const RegionMoments m = tables.moments(r, c);
      const auto area = static_cast<std::uint64_t>(m.area);
      const auto mean = static_cast<Sample>((2 * m.sum + area) / (2 * area));
      for (int y = r.y; y < r.bottom(); ++y) {
        for (int x = r.x; x < r.right(); ++x) out.at(c, x, y) = mean;
      }
    }
  }
  return out;
}

int cuboid_count_from_blocks(int width, int height, int block) {
  if (block < 1) throw std::invalid_argument("block size must be at least 1");
  if (width < 0 || height < 0) throw std::invalid_argument("negative frame size");
  return (width / block) * (height / block);
}

void write_partition_dump(std::ostream& out, const CuboidPartition& partition) {
  out << "# cuboids " << partition.cuboids.size() << " total_sse " << std::fixed
      << std::setprecision(4) << partition.total_sse << "\n";
  for (const Cuboid& r : partition.cuboids) {
    out << r.x << ' ' << r.y << ' ' << r.w << ' ' << r.h << '\n';
  }
}

PartitionDump read_partition_dump(std::istream& in) {
  PartitionDump dump;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (line[0] == '#') {
      std::string tag;
      fields >> tag;
      while (fields >> tag) {
        if (tag == "total_sse") {
          double v = 0;
          if (fields >> v) dump.total_sse = v;
        }
      }
      continue;
    }
    Cuboid r;
    std::string extra;
    if (!(fields >> r.x >> r.y >> r.w >> r.h) || (fields >> extra)) {
      throw std::runtime_error("malformed partition dump line " + std::to_string(line_no));
    }
    dump.cuboids.push_back(r);
  }
  return dump;
}

}  // namespace cupid
