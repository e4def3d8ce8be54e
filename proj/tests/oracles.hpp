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

// Slow reference implementations used only by tests. They read samples
// directly and share no code with the library beyond Frame and Cuboid.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <tuple>
#include <vector>

#include "cupid/frame.hpp"
#include "cupid/geometry.hpp"

namespace cupid::oracle {

using i128 = __int128;

// Exact fraction with positive denominator.
struct Frac {
  i128 num = 0;
  i128 den = 1;
};

inline int cmp(const Frac& a, const Frac& b) {
  const i128 l = a.num * b.den;
  const i128 r = b.num * a.den;
  return l < r ? -1 : (l > r ? 1 : 0);
}

inline Frac sub(const Frac& a, const Frac& b) {
  return {a.num * b.den - b.num * a.den, a.den * b.den};
}

inline Frac add(const Frac& a, const Frac& b) {
  return {a.num * b.den + b.num * a.den, a.den * b.den};
}

// SSE of a region around its mean, as the exact fraction
// (area * sum(p^2) - sum(p)^2) / area.
inline Frac region_sse(const Frame& f, const Cuboid& r, int channel = 0) {
  i128 s = 0;
  i128 q = 0;
  for (int y = r.y; y < r.y + r.h; ++y) {
    for (int x = r.x; x < r.x + r.w; ++x) {
      const i128 v = f.at(channel, x, y);
      s += v;
      q += v * v;
    }
  }
  const i128 a = static_cast<i128>(r.w) * r.h;
  return {a * q - s * s, a};
}

// Two-pass floating reference: mean first, then squared deviations.
inline double region_sse_two_pass(const Frame& f, const Cuboid& r, int channel = 0) {
  long double sum = 0;
  for (int y = r.y; y < r.y + r.h; ++y)
    for (int x = r.x; x < r.x + r.w; ++x) sum += f.at(channel, x, y);
  const long double mean = sum / (static_cast<long double>(r.w) * r.h);
  long double sse = 0;
  for (int y = r.y; y < r.y + r.h; ++y) {
    for (int x = r.x; x < r.x + r.w; ++x) {
      const long double d = f.at(channel, x, y) - mean;
      sse += d * d;
    }
  }
  return static_cast<double>(sse);
}

inline std::uint64_t pair_sse(const Frame& a, const Frame& b, const Cuboid& r, int channel = 0) {
  std::uint64_t total = 0;
  for (int y = r.y; y < r.y + r.h; ++y) {
    for (int x = r.x; x < r.x + r.w; ++x) {
      const std::int64_t d = static_cast<std::int64_t>(a.at(channel, x, y)) - b.at(channel, x, y);
      total += static_cast<std::uint64_t>(d * d);
    }
  }
  return total;
}

// One greedy step as recorded by the oracle. vertical: offset from the left.
struct Step {
  Cuboid region;
  bool vertical = true;
  int offset = 0;
};

struct CandidateSplit {
  bool vertical = true;
  int offset = 0;
  Frac after;
};

inline std::pair<Cuboid, Cuboid> halves(const Cuboid& r, bool vertical, int offset) {
  if (vertical) return {{r.x, r.y, offset, r.h}, {r.x + offset, r.y, r.w - offset, r.h}};
  return {{r.x, r.y, r.w, offset}, {r.x, r.y + offset, r.w, r.h - offset}};
}

// Exhaustive best split of one region summed over `channels`; the first
// strict minimum in (vertical offsets, then horizontal offsets) order wins.
inline std::optional<CandidateSplit> best_split(const Frame& f, const Cuboid& r,
                                                const std::vector<int>& channels = {0}) {
  std::optional<CandidateSplit> best;
  auto sse_of = [&](const Cuboid& c) {
    Frac total{0, 1};
    for (int ch : channels) total = add(total, region_sse(f, c, ch));
    return total;
  };
  auto try_split = [&](bool vertical, int offset) {
    auto [a, b] = halves(r, vertical, offset);
    const Frac after = add(sse_of(a), sse_of(b));
    if (!best || cmp(after, best->after) < 0) best = CandidateSplit{vertical, offset, after};
  };
  for (int o = 1; o < r.w; ++o) try_split(true, o);
  for (int o = 1; o < r.h; ++o) try_split(false, o);
  return best;
}

// From-scratch greedy partition: every step rescans every leaf. Leaves are
// kept with their creation stamp; equal gains go to the oldest leaf.
inline std::vector<Step> greedy_partition(const Frame& f, int n) {
  struct Leaf {
    Cuboid region;
    int stamp;
  };
  std::vector<Leaf> leaves{{{0, 0, f.width(), f.height()}, 0}};
  int next_stamp = 1;
  std::vector<Step> steps;
  while (static_cast<int>(leaves.size()) < n) {
    int pick = -1;
    Frac pick_gain;
    CandidateSplit pick_split;
    for (int i = 0; i < static_cast<int>(leaves.size()); ++i) {
      const auto s = best_split(f, leaves[i].region);
      if (!s) continue;
      const Frac gain = sub(region_sse(f, leaves[i].region), s->after);
      const bool better = pick < 0 || cmp(gain, pick_gain) > 0 ||
                          (cmp(gain, pick_gain) == 0 && leaves[i].stamp < leaves[pick].stamp);
      if (better) {
        pick = i;
        pick_gain = gain;
        pick_split = *s;
      }
    }
    if (pick < 0) break;
    const Cuboid r = leaves[pick].region;
    steps.push_back({r, pick_split.vertical, pick_split.offset});
    auto [a, b] = halves(r, pick_split.vertical, pick_split.offset);
    leaves.erase(leaves.begin() + pick);
    leaves.push_back({a, next_stamp++});
    leaves.push_back({b, next_stamp++});
  }
  return steps;
}

struct Match {
  int dx = 0;
  int dy = 0;
  std::uint64_t cost = 0;
};

// Matching cost with the reference read at clamped coordinates.
inline std::uint64_t match_cost(const Frame& cur, const Frame& ref, const Cuboid& r, int dx,
                                int dy, bool sad = false) {
  std::uint64_t total = 0;
  for (int y = r.y; y < r.y + r.h; ++y) {
    for (int x = r.x; x < r.x + r.w; ++x) {
      const int rx = std::clamp(x + dx, 0, ref.width() - 1);
      const int ry = std::clamp(y + dy, 0, ref.height() - 1);
      const std::int64_t d = static_cast<std::int64_t>(cur.at(0, x, y)) - ref.at(0, rx, ry);
      total += static_cast<std::uint64_t>(sad ? std::llabs(d) : d * d);
    }
  }
  return total;
}

// Triple loop over the window; ties by (|dx|+|dy|, dy, dx).
inline Match full_search(const Frame& cur, const Frame& ref, const Cuboid& r, int range,
                         bool sad = false) {
  std::optional<Match> best;
  auto key = [](const Match& m) { return std::make_tuple(std::abs(m.dx) + std::abs(m.dy), m.dy, m.dx); };
  for (int dy = -range; dy <= range; ++dy) {
    for (int dx = -range; dx <= range; ++dx) {
      const Match m{dx, dy, match_cost(cur, ref, r, dx, dy, sad)};
      if (!best || m.cost < best->cost || (m.cost == best->cost && key(m) < key(*best))) best = m;
    }
  }
  return *best;
}

// Motion-compensated frame built pixel by pixel (single channel).
inline Frame compensate_luma(const Frame& ref, const std::vector<Cuboid>& regions,
                             const std::vector<Match>& matches) {
  Frame out(ref.width(), ref.height());
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const Cuboid& r = regions[i];
    for (int y = r.y; y < r.y + r.h; ++y) {
      for (int x = r.x; x < r.x + r.w; ++x) {
        const int rx = std::clamp(x + matches[i].dx, 0, ref.width() - 1);
        const int ry = std::clamp(y + matches[i].dy, 0, ref.height() - 1);
        out.at(0, x, y) = ref.at(0, rx, ry);
      }
    }
  }
  return out;
}

}  // namespace cupid::oracle
