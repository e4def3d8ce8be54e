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

#include "cupid/frame.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cupid {

namespace {

int ceil_shift(int v, int shift) { return (v + (1 << shift) - 1) >> shift; }

int format_channels(RawFormat format) {
  return format == RawFormat::kGray8 ? 1 : 3;
}

Subsampling format_subsampling(RawFormat format) {
  return format == RawFormat::kYuv420p8 ? Subsampling::k420 : Subsampling::k444;
}

}  // namespace

bool tiles_frame(const std::vector<Cuboid>& regions, int width, int height) {
  if (width <= 0 || height <= 0) return false;
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(width) * height, 0);
  std::int64_t total = 0;
  for (const Cuboid& r : regions) {
    if (!r.inside(width, height)) return false;
    for (int y = r.y; y < r.bottom(); ++y) {
      for (int x = r.x; x < r.right(); ++x) {
        auto& c = covered[static_cast<std::size_t>(y) * width + x];
        if (c) return false;
        c = 1;
      }
    }
    total += r.area();
  }
  return total == static_cast<std::int64_t>(width) * height;
}

Frame::Frame(int width, int height, int channels, Subsampling subsampling,
             int bit_depth)
    : width_(width),
      height_(height),
      bit_depth_(bit_depth),
      subsampling_(subsampling) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("frame dimensions must be positive");
  }
  if (channels < 1) throw std::invalid_argument("frame needs at least one channel");
  if (bit_depth < 1 || bit_depth > 16) {
    throw std::invalid_argument("bit depth must be in [1, 16]");
  }
  planes_.resize(channels);
  for (int c = 0; c < channels; ++c) {
    planes_[c].assign(static_cast<std::size_t>(plane_width(c)) * plane_height(c), 0);
  }
}

int Frame::plane_shift(int channel) const {
  return (channel > 0 && subsampling_ == Subsampling::k420) ? 1 : 0;
}

int Frame::plane_width(int channel) const {
  return ceil_shift(width_, plane_shift(channel));
}

int Frame::plane_height(int channel) const {
  return ceil_shift(height_, plane_shift(channel));
}

bool Frame::same_shape(const Frame& other) const {
  return width_ == other.width_ && height_ == other.height_ &&
         bit_depth_ == other.bit_depth_ && subsampling_ == other.subsampling_ &&
         channels() == other.channels();
}

void Frame::validate() const {
  for (int c = 0; c < channels(); ++c) {
    if (planes_[c].size() !=
        static_cast<std::size_t>(plane_width(c)) * plane_height(c)) {
      throw std::invalid_argument("plane size does not match frame geometry");
    }
    for (Sample s : planes_[c]) {
      if (s > max_value()) {
        throw std::invalid_argument("sample exceeds bit depth range");
      }
    }
  }
}

std::vector<std::vector<Frame>> split_into_gops(const Sequence& sequence,
                                                const GopLayout& layout) {
  if (layout.gop_size < 1) throw std::invalid_argument("gop_size must be >= 1");
  if (layout.anchor_index != 0) {
    throw std::invalid_argument("the anchor must be the first frame of a GOP");
  }
  std::vector<std::vector<Frame>> gops;
  for (std::size_t i = 0; i < sequence.frames.size(); i += layout.gop_size) {
    auto end = std::min(sequence.frames.size(), i + layout.gop_size);
    gops.emplace_back(sequence.frames.begin() + i, sequence.frames.begin() + end);
  }
  return gops;
}

RawFormat parse_raw_format(std::string_view name) {
  if (name == "yuv420p8" || name == "yuv420p") return RawFormat::kYuv420p8;
  if (name == "yuv444p8" || name == "yuv444p") return RawFormat::kYuv444p8;
  if (name == "gray8" || name == "gray") return RawFormat::kGray8;
  throw std::invalid_argument("unknown raw format '" + std::string(name) + "'");
}

std::string_view raw_format_name(RawFormat format) {
  switch (format) {
    case RawFormat::kYuv420p8: return "yuv420p8";
    case RawFormat::kYuv444p8: return "yuv444p8";
    case RawFormat::kGray8: return "gray8";
  }
  return "?";
}

std::size_t raw_frame_bytes(int width, int height, RawFormat format) {
  const std::size_t luma = static_cast<std::size_t>(width) * height;
  switch (format) {
    case RawFormat::kGray8: return luma;
    case RawFormat::kYuv444p8: return 3 * luma;
    case RawFormat::kYuv420p8:
      return luma + 2 * static_cast<std::size_t>(ceil_shift(width, 1)) *
                        ceil_shift(height, 1);
  }
  return 0;
}

Sequence load_raw_video(const std::filesystem::path& path, int width,
                        int height, RawFormat format, int max_frames) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("frame width and height must be positive");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());

  const std::size_t frame_bytes = raw_frame_bytes(width, height, format);
  const std::size_t whole = bytes.size() / frame_bytes;
  if (bytes.size() % frame_bytes != 0) {
    std::ostringstream msg;
    msg << "truncated file '" << path.string() << "': partial frame at byte offset "
        << whole * frame_bytes << " (" << bytes.size() - whole * frame_bytes
        << " of " << frame_bytes << " bytes)";
    throw std::runtime_error(msg.str());
  }

  std::size_t count = whole;
  if (max_frames > 0) count = std::min(count, static_cast<std::size_t>(max_frames));

  Sequence seq;
  seq.frames.reserve(count);
  std::size_t offset = 0;
  for (std::size_t f = 0; f < count; ++f) {
    Frame frame(width, height, format_channels(format), format_subsampling(format));
    for (int c = 0; c < frame.channels(); ++c) {
      auto plane = frame.plane(c);
      for (Sample& s : plane) s = static_cast<unsigned char>(bytes[offset++]);
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

void save_raw_video(const std::filesystem::path& path,
                    std::span<const Frame> frames, RawFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  for (const Frame& frame : frames) {
    if (frame.channels() != format_channels(format) ||
        (frame.channels() > 1 && frame.subsampling() != format_subsampling(format)) ||
        frame.bit_depth() != 8) {
      throw std::invalid_argument("frame layout does not match raw format " +
                                  std::string(raw_format_name(format)));
    }
    std::vector<char> buf;
    for (int c = 0; c < frame.channels(); ++c) {
      for (Sample s : frame.plane(c)) buf.push_back(static_cast<char>(s));
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

namespace {

// Reads the next whitespace-separated header token, skipping '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  while (in) {
    int ch = in.peek();
    if (ch == '#') {
      std::string skip;
      std::getline(in, skip);
    } else if (std::isspace(ch)) {
      in.get();
    } else {
      break;
    }
  }
  in >> tok;
  return tok;
}

}  // namespace

Frame read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  const std::string magic = pnm_token(in);
  if (magic != "P5" && magic != "P6") {
    throw std::runtime_error("'" + path.string() + "' is not a binary PGM/PPM file");
  }
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(pnm_token(in));
    height = std::stoi(pnm_token(in));
    maxval = std::stoi(pnm_token(in));
  } catch (const std::exception&) {
    throw std::runtime_error("malformed PNM header in '" + path.string() + "'");
  }
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255) {
    throw std::runtime_error("unsupported PNM geometry or maxval in '" +
                             path.string() + "'");
  }
  in.get();  // single whitespace before the raster

  const int channels = magic == "P6" ? 3 : 1;
  std::vector<unsigned char> raster(static_cast<std::size_t>(width) * height * channels);
  in.read(reinterpret_cast<char*>(raster.data()),
          static_cast<std::streamsize>(raster.size()));
  if (in.gcount() != static_cast<std::streamsize>(raster.size())) {
    throw std::runtime_error("truncated PNM raster in '" + path.string() + "'");
  }

  Frame frame(width, height, channels);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < channels; ++c) {
        frame.at(c, x, y) =
            raster[(static_cast<std::size_t>(y) * width + x) * channels + c];
      }
    }
  }
  return frame;
}

void write_pnm(const std::filesystem::path& path, const Frame& frame) {
  const int channels = frame.channels();
  if ((channels != 1 && channels != 3) || frame.bit_depth() != 8 ||
      frame.subsampling() != Subsampling::k444) {
    throw std::invalid_argument("PNM output needs an 8-bit 4:4:4 frame with 1 or 3 channels");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << (channels == 3 ? "P6" : "P5") << "\n"
      << frame.width() << " " << frame.height() << "\n255\n";
  std::vector<char> raster;
  raster.reserve(static_cast<std::size_t>(frame.width()) * frame.height() * channels);
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      for (int c = 0; c < channels; ++c) {
        raster.push_back(static_cast<char>(frame.at(c, x, y)));
      }
    }
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
}

double psnr(const Frame& a, const Frame& b, ChannelPolicy policy) {
  if (!a.same_shape(b)) throw std::invalid_argument("psnr: frame shapes differ");
  const int last = policy == ChannelPolicy::kLumaOnly ? 1 : a.channels();
  std::uint64_t sse = 0;
  std::uint64_t count = 0;
  for (int c = 0; c < last; ++c) {
    sse += sse_region(a, b, Cuboid{0, 0, a.plane_width(c), a.plane_height(c)}, c);
    count += a.plane(c).size();
  }
  if (sse == 0) return kInfinitePsnr;
  const double peak = a.max_value();
  const double mse = static_cast<double>(sse) / static_cast<double>(count);
  return 10.0 * std::log10(peak * peak / mse);
}

std::uint64_t sse_region(const Frame& a, const Frame& b, const Cuboid& region,
                         int channel) {
  if (!a.same_shape(b)) throw std::invalid_argument("sse_region: frame shapes differ");
  if (channel < 0 || channel >= a.channels()) {
    throw std::invalid_argument("sse_region: channel out of range");
  }
  if (!region.inside(a.plane_width(channel), a.plane_height(channel))) {
    throw std::invalid_argument("sse_region: region out of bounds");
  }
  const auto pa = a.plane(channel);
  const auto pb = b.plane(channel);
  const std::size_t stride = a.plane_width(channel);
  std::uint64_t sse = 0;
  for (int y = region.y; y < region.bottom(); ++y) {
    const Sample* ra = pa.data() + y * stride;
    const Sample* rb = pb.data() + y * stride;
    std::uint64_t row = 0;
    for (int x = region.x; x < region.right(); ++x) {
      const std::int64_t d = static_cast<std::int64_t>(ra[x]) - rb[x];
      row += static_cast<std::uint64_t>(d * d);
    }
    sse += row;
  }
  return sse;
}

Cuboid map_to_plane(const Frame& frame, const Cuboid& luma_region, int channel) {
  const int s = frame.plane_shift(channel);
  if (s == 0) return luma_region;
  const int x0 = ceil_shift(luma_region.x, s);
  const int y0 = ceil_shift(luma_region.y, s);
  const int x1 = ceil_shift(luma_region.right(), s);
  const int y1 = ceil_shift(luma_region.bottom(), s);
  return Cuboid{x0, y0, x1 - x0, y1 - y0};
}

}  // namespace cupid
