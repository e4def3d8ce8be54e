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
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cupid/geometry.hpp"

namespace cupid {

using Sample = std::uint16_t;

enum class Subsampling { k444, k420 };

enum class ChannelPolicy { kLumaOnly, kAllChannels };

// PSNR of identical frames. Kept as IEEE infinity so that callers have to
// handle it explicitly instead of fitting a large sentinel.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

inline bool is_infinite_psnr(double db) { return db == kInfinitePsnr; }

// Multi-plane raster. Plane 0 is luma; for 4:2:0 frames planes 1.. are stored
// at ceil(width/2) x ceil(height/2).
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height, int channels = 1,
        Subsampling subsampling = Subsampling::k444, int bit_depth = 8);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return static_cast<int>(planes_.size()); }
  int bit_depth() const { return bit_depth_; }
  Subsampling subsampling() const { return subsampling_; }
  int max_value() const { return (1 << bit_depth_) - 1; }

  int plane_width(int channel) const;
  int plane_height(int channel) const;
  // Horizontal/vertical shift from luma to the given plane (0 or 1).
  int plane_shift(int channel) const;

  std::span<const Sample> plane(int channel) const { return planes_.at(channel); }
  std::span<Sample> plane(int channel) { return planes_.at(channel); }

  Sample at(int channel, int x, int y) const {
    return planes_[channel][static_cast<std::size_t>(y) * plane_width(channel) + x];
  }
  Sample& at(int channel, int x, int y) {
    return planes_[channel][static_cast<std::size_t>(y) * plane_width(channel) + x];
  }

  bool same_shape(const Frame& other) const;
  // Throws std::invalid_argument if any sample exceeds max_value().
  void validate() const;

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int bit_depth_ = 8;
  Subsampling subsampling_ = Subsampling::k444;
  std::vector<std::vector<Sample>> planes_;
};

struct Sequence {
  std::vector<Frame> frames;
  double frame_rate = 0.0;  // metadata only

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
};

struct GopLayout {
  int gop_size = 8;
  int anchor_index = 0;
};

// Splits a sequence into consecutive GOPs; the trailing GOP may be shorter.
std::vector<std::vector<Frame>> split_into_gops(const Sequence& sequence,
                                                const GopLayout& layout);

enum class RawFormat { kYuv420p8, kYuv444p8, kGray8 };

RawFormat parse_raw_format(std::string_view name);
std::string_view raw_format_name(RawFormat format);
std::size_t raw_frame_bytes(int width, int height, RawFormat format);

// Planar, row-major, top-left origin. max_frames == 0 reads the whole file.
Sequence load_raw_video(const std::filesystem::path& path, int width,
                        int height, RawFormat format, int max_frames = 0);
void save_raw_video(const std::filesystem::path& path,
                    std::span<const Frame> frames, RawFormat format);

// Binary PGM (P5) and PPM (P6), maxval <= 255. PPM yields a 3-channel 4:4:4
// frame.
Frame read_pnm(const std::filesystem::path& path);
void write_pnm(const std::filesystem::path& path, const Frame& frame);

// 10*log10(MAX^2 / MSE). kInfinitePsnr when MSE is zero.
double psnr(const Frame& a, const Frame& b,
            ChannelPolicy policy = ChannelPolicy::kLumaOnly);

// Sum of squared sample differences over `region` (in the channel's plane
// coordinates).
std::uint64_t sse_region(const Frame& a, const Frame& b, const Cuboid& region,
                         int channel = 0);

// Maps a luma rectangle onto plane `channel`. Plane pixel p belongs to the
// luma rectangle containing luma pixel p << shift, so mapped rectangles of a
// luma tiling tile the plane. May return an empty (w or h == 0) rectangle.
Cuboid map_to_plane(const Frame& frame, const Cuboid& luma_region, int channel);

}  // namespace cupid
