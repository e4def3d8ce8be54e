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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cupid/frame.hpp"
#include "cupid/motion.hpp"
#include "cupid/partition.hpp"

namespace cupid {

enum class Scheme { kCuboid, kFixedBlock, kCoarse };
enum class PartitionSource { kAnchorOnly, kPerFrame };
enum class ReferenceMode { kChainedPredicted, kPreviousOriginal };

Scheme parse_scheme(std::string_view name);
PartitionSource parse_partition_source(std::string_view name);
ReferenceMode parse_reference_mode(std::string_view name);
MatchMetric parse_metric(std::string_view name);
ChannelPolicy parse_channel_policy(std::string_view name);
std::string_view to_string(Scheme v);
std::string_view to_string(PartitionSource v);
std::string_view to_string(ReferenceMode v);
std::string_view to_string(MatchMetric v);
std::string_view to_string(ChannelPolicy v);

struct PipelineConfig {
  int gop_size = 16;
  // Cuboid count; when unset it is floor(W / block) * floor(H / block).
  std::optional<int> n_cuboids;
  int block_size = 32;
  PartitionSource partition_source = PartitionSource::kAnchorOnly;
  ReferenceMode reference_mode = ReferenceMode::kChainedPredicted;
  SearchConfig search;
  Scheme scheme = Scheme::kCuboid;
  ChannelPolicy channels = ChannelPolicy::kAllChannels;
  // Dead-zone quantizer step for the residual entropy estimate (1 = lossless).
  int quant_step = 1;
  int threads = 1;
};

// Throws std::invalid_argument on inconsistent settings.
void validate(const PipelineConfig& config);

int effective_cuboid_count(const PipelineConfig& config, int width, int height);

// One predicted frame of a GOP (frame index >= 1).
struct FrameResult {
  int index = 0;
  Frame predicted;
  Residual residual;
  double psnr = 0;  // prediction vs original, luma
  int regions = 0;
  std::uint64_t tree_bits = 0;
  std::uint64_t motion_bits = 0;
  std::uint64_t side_info_bits() const { return tree_bits + motion_bits; }
};

struct GopResult {
  Scheme scheme = Scheme::kCuboid;
  std::uint64_t anchor_tree_bits = 0;  // counted once under anchor_only
  std::vector<FrameResult> frames;

  std::uint64_t side_info_bits() const;
  double mean_psnr() const;  // infinite when every frame is predicted exactly
};

// Frame 0 is the anchor. P-frames are predicted from the previous prediction
// (chained) or the previous original; the coarse scheme replaces each frame by
// its coarse version instead.
GopResult run_gop(const std::vector<Frame>& gop, const PipelineConfig& config);

// Dead-zone quantizer and its reconstruction (exact for step 1).
std::int32_t quantize(std::int32_t value, int step);
std::int32_t dequantize(std::int32_t level, int step);

struct ResidualEstimate {
  std::uint64_t bits = 0;  // sum over frames of ceil(N * entropy)
  double mean_psnr = 0;    // luma PSNR of prediction + dequantized residual
  std::vector<double> frame_psnr;
};

// Zero-order entropy of the quantized residual levels, all planes pooled per
// frame. Labelled an estimate: it stands in for an external residual coder.
ResidualEstimate estimate_residual(const std::vector<Frame>& gop, const GopResult& result,
                                   int quant_step);

// side_info_bits + residual bits; the estimate is used when no external count
// is supplied.
std::uint64_t total_bits(const GopResult& result, std::uint64_t residual_bits);

}  // namespace cupid
