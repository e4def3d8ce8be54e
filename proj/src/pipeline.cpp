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

#include "cupid/pipeline.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "cupid/parallel.hpp"

namespace cupid {

namespace {

[[noreturn]] void bad_name(std::string_view what, std::string_view name) {
  throw std::invalid_argument("unknown " + std::string(what) + " '" + std::string(name) + "'");
}

double mean_of(const std::vector<double>& values) {
  if (values.empty()) return 0;
  double sum = 0;
  for (double v : values) {
    if (is_infinite_psnr(v)) return kInfinitePsnr;
    sum += v;
  }
  return sum / static_cast<double>(values.size());
}

}  // namespace

Scheme parse_scheme(std::string_view n) {
  if (n == "cuboid") return Scheme::kCuboid;
  if (n == "fixed_block") return Scheme::kFixedBlock;
  if (n == "coarse") return Scheme::kCoarse;
  bad_name("scheme", n);
}

PartitionSource parse_partition_source(std::string_view n) {
  if (n == "anchor_only") return PartitionSource::kAnchorOnly;
  if (n == "per_frame") return PartitionSource::kPerFrame;
  bad_name("partition source", n);
}

ReferenceMode parse_reference_mode(std::string_view n) {
  if (n == "chained_predicted") return ReferenceMode::kChainedPredicted;
  if (n == "previous_original") return ReferenceMode::kPreviousOriginal;
  bad_name("reference mode", n);
}

MatchMetric parse_metric(std::string_view n) {
  if (n == "sse") return MatchMetric::kSse;
  if (n == "sad") return MatchMetric::kSad;
  bad_name("metric", n);
}

ChannelPolicy parse_channel_policy(std::string_view n) {
  if (n == "luma" || n == "luma_only") return ChannelPolicy::kLumaOnly;
  if (n == "all" || n == "all_channels") return ChannelPolicy::kAllChannels;
  bad_name("channel policy", n);
}

std::string_view to_string(Scheme v) {
  switch (v) {
    case Scheme::kCuboid: return "cuboid";
    case Scheme::kFixedBlock: return "fixed_block";
    case Scheme::kCoarse: return "coarse";
  }
  return "?";
}

std::string_view to_string(PartitionSource v) {
  return v == PartitionSource::kAnchorOnly ? "anchor_only" : "per_frame";
}

std::string_view to_string(ReferenceMode v) {
  return v == ReferenceMode::kChainedPredicted ? "chained_predicted" : "previous_original";
}

std::string_view to_string(MatchMetric v) { return v == MatchMetric::kSse ? "sse" : "sad"; }

std::string_view to_string(ChannelPolicy v) {
  return v == ChannelPolicy::kLumaOnly ? "luma" : "all";
}

void validate(const PipelineConfig& c) {
  if (c.gop_size < 1) throw std::invalid_argument("gop_size must be >= 1");
  if (c.block_size < 1) throw std::invalid_argument("block_size must be >= 1");
  if (c.n_cuboids && *c.n_cuboids < 1) throw std::invalid_argument("n_cuboids must be >= 1");
  if (c.search.range < 0) throw std::invalid_argument("search range must be >= 0");
  if (c.quant_step < 1) throw std::invalid_argument("quant_step must be >= 1");
  if (c.threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (c.scheme == Scheme::kCoarse && c.partition_source == PartitionSource::kAnchorOnly) {
    throw std::invalid_argument(
        "the coarse scheme partitions every frame; use partition_source per_frame");
  }
  if (c.scheme == Scheme::kFixedBlock && c.partition_source == PartitionSource::kPerFrame) {
    throw std::invalid_argument("the fixed_block scheme has no per-frame partition");
  }
}

int effective_cuboid_count(const PipelineConfig& config, int width, int height) {
  const int n = config.n_cuboids ? *config.n_cuboids
                                 : cuboid_count_from_blocks(width, height, config.block_size);
  if (n < 1) throw std::invalid_argument("frame is smaller than one block; set n_cuboids");
  return n;
}

std::uint64_t GopResult::side_info_bits() const {
  std::uint64_t total = anchor_tree_bits;
  for (const auto& f : frames) total += f.side_info_bits();
  return total;
}

double GopResult::mean_psnr() const {
  std::vector<double> values;
  for (const auto& f : frames) values.push_back(f.psnr);
  return mean_of(values);
}

GopResult run_gop(const std::vector<Frame>& gop, const PipelineConfig& config) {
  validate(config);
  if (gop.empty()) throw std::invalid_argument("run_gop: empty GOP");
  if (static_cast<int>(gop.size()) > config.gop_size) {
    throw std::invalid_argument("run_gop: more frames than gop_size");
  }
  for (const Frame& f : gop) {
    if (!f.same_shape(gop.front())) throw std::invalid_argument("run_gop: frames differ in shape");
  }
  const int width = gop.front().width();
  const int height = gop.front().height();

  GopResult result;
  result.scheme = config.scheme;
  const std::size_t count = gop.size();
  result.frames.resize(count - 1);

  // Per-frame partitions depend only on the originals.
  std::vector<CuboidPartition> own(count);
  if (config.scheme != Scheme::kFixedBlock &&
      config.partition_source == PartitionSource::kPerFrame) {
    const int n = effective_cuboid_count(config, width, height);
    parallel_for(count - 1, config.threads, [&](std::size_t i) {
      own[i + 1] = partition(gop[i + 1], n, config.channels);
    });
  }

  if (config.scheme == Scheme::kCoarse) {
    for (std::size_t k = 1; k < count; ++k) {
      FrameResult& fr = result.frames[k - 1];
      fr.index = static_cast<int>(k);
      fr.predicted = coarsen(gop[k], own[k]);
      fr.regions = own[k].size();
      fr.tree_bits = tree_bit_cost(own[k].tree).bits;
      fr.residual = residual(gop[k], fr.predicted);
      fr.psnr = fr.residual.psnr;
    }
    return result;
  }

  std::vector<Cuboid> shared_regions;
  if (config.scheme == Scheme::kFixedBlock) {
    shared_regions = fixed_block_grid(width, height, config.block_size);
  } else if (config.partition_source == PartitionSource::kAnchorOnly) {
    const CuboidPartition anchor =
        partition(gop.front(), effective_cuboid_count(config, width, height), config.channels);
    shared_regions = anchor.cuboids;
    result.anchor_tree_bits = tree_bit_cost(anchor.tree).bits;
  }

  for (std::size_t k = 1; k < count; ++k) {
    FrameResult& fr = result.frames[k - 1];
    fr.index = static_cast<int>(k);
    const Frame& reference =
        (config.reference_mode == ReferenceMode::kChainedPredicted && k >= 2)
            ? result.frames[k - 2].predicted
            : gop[k - 1];
    const bool own_tree = config.scheme == Scheme::kCuboid &&
                          config.partition_source == PartitionSource::kPerFrame;
    const std::vector<Cuboid>& regions = own_tree ? own[k].cuboids : shared_regions;
    if (own_tree) fr.tree_bits = tree_bit_cost(own[k].tree).bits;

    const MotionField field =
        estimate_motion(gop[k], reference, regions, config.search, config.threads);
    fr.predicted = compensate(reference, field);
    fr.regions = static_cast<int>(regions.size());
    fr.motion_bits = motion_bit_cost(field, config.search);
    fr.residual = residual(gop[k], fr.predicted);
    fr.psnr = fr.residual.psnr;
  }
  return result;
}

std::int32_t quantize(std::int32_t value, int step) {
  if (step < 1) throw std::invalid_argument("quantizer step must be >= 1");
  const std::int32_t mag = (value < 0 ? -value : value) / step;
  return value < 0 ? -mag : mag;
}

std::int32_t dequantize(std::int32_t level, int step) {
  if (level == 0) return 0;
  const std::int32_t mag = (level < 0 ? -level : level) * step + step / 2;
  return level < 0 ? -mag : mag;
}

ResidualEstimate estimate_residual(const std::vector<Frame>& gop, const GopResult& result,
                                   int quant_step) {
  if (quant_step < 1) throw std::invalid_argument("quantizer step must be >= 1");
  ResidualEstimate est;
  for (const FrameResult& fr : result.frames) {
    const Frame& original = gop.at(fr.index);
    Residual coded = fr.residual;
    std::map<std::int32_t, std::uint64_t> histogram;
    std::uint64_t n = 0;
    for (auto& plane : coded.planes) {
      for (auto& v : plane) {
        const std::int32_t level = quantize(v, quant_step);
        ++histogram[level];
        ++n;
        v = dequantize(level, quant_step);
      }
    }
    double bits = 0;
    for (const auto& [level, c] : histogram) {
      bits -= static_cast<double>(c) * std::log2(static_cast<double>(c) / static_cast<double>(n));
    }
    est.bits += static_cast<std::uint64_t>(std::ceil(bits - 1e-9));
    est.frame_psnr.push_back(psnr(original, reconstruct(fr.predicted, coded)));
  }
  est.mean_psnr = mean_of(est.frame_psnr);
  return est;
}

std::uint64_t total_bits(const GopResult& result, std::uint64_t residual_bits) {
  return result.side_info_bits() + residual_bits;
}

}  // namespace cupid
