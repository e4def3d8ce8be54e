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


#include <cmath>
#include <random>

#include "cupid/frame.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace cupid;
using cupid::testing::TempDir;

TEST_SUITE("frame_model") {

TEST_CASE("plane geometry follows the subsampling") {
  Frame f(5, 3, 3, Subsampling::k420);
  CHECK(f.plane_width(0) == 5);
  CHECK(f.plane_height(0) == 3);
  CHECK(f.plane_width(1) == 3);
  CHECK(f.plane_height(2) == 2);
  CHECK(f.plane(1).size() == 6u);
  Frame g(5, 3, 3);
  CHECK(g.plane_width(2) == 5);
  CHECK_THROWS_AS(Frame(0, 4), std::invalid_argument);
}

TEST_CASE("validate rejects samples above the bit depth") {
  Frame f(2, 2);
  f.at(0, 1, 1) = 256;
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
  f.at(0, 1, 1) = 255;
  CHECK_NOTHROW(f.validate());
}

TEST_CASE("two gray8 frames load from a 32 byte file") {
  TempDir dir;
  std::vector<unsigned char> bytes(32);
  for (int i = 0; i < 32; ++i) bytes[i] = static_cast<unsigned char>(i * 7);
  testing::write_bytes(dir / "a.gray", bytes);
  const Sequence seq = load_raw_video(dir / "a.gray", 4, 4, RawFormat::kGray8);
  REQUIRE(seq.size() == 2);
  CHECK(seq.frames[0].channels() == 1);
  CHECK(seq.frames[1].at(0, 0, 0) == 16 * 7 % 256);
  CHECK(seq.frames[0].at(0, 3, 1) == 7 * 7);
  CHECK(load_raw_video(dir / "a.gray", 4, 4, RawFormat::kGray8, 1).size() == 1);
}

TEST_CASE("one 4x4 yuv420p8 frame has 2x2 chroma") {
  TempDir dir;
  std::vector<unsigned char> bytes(24);
  for (int i = 0; i < 24; ++i) bytes[i] = static_cast<unsigned char>(i);
  testing::write_bytes(dir / "a.yuv", bytes);
  const Sequence seq = load_raw_video(dir / "a.yuv", 4, 4, RawFormat::kYuv420p8);
  REQUIRE(seq.size() == 1);
  const Frame& f = seq.frames[0];
  CHECK(f.channels() == 3);
  CHECK(f.plane_width(1) == 2);
  CHECK(f.plane_height(2) == 2);
  CHECK(f.at(1, 0, 0) == 16);
  CHECK(f.at(2, 1, 1) == 23);
}

TEST_CASE("truncated file names the partial frame offset") {
  TempDir dir;
  testing::write_bytes(dir / "t.gray", std::vector<unsigned char>(25, 1));
  try {
    load_raw_video(dir / "t.gray", 4, 4, RawFormat::kGray8);
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("byte offset 16") != std::string::npos);
  }
  CHECK_THROWS_AS(load_raw_video(dir / "t.gray", 0, 4, RawFormat::kGray8), std::invalid_argument);
  CHECK_THROWS_AS(load_raw_video(dir / "missing", 4, 4, RawFormat::kGray8), std::runtime_error);
}

TEST_CASE("raw load then save is byte identical for every format") {
  TempDir dir;
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> byte(0, 255);
  for (RawFormat fmt : {RawFormat::kGray8, RawFormat::kYuv444p8, RawFormat::kYuv420p8}) {
    CAPTURE(raw_format_name(fmt));
    std::vector<unsigned char> bytes(raw_frame_bytes(7, 5, fmt) * 3);
    for (auto& b : bytes) b = static_cast<unsigned char>(byte(rng));
    testing::write_bytes(dir / "in", bytes);
    const Sequence seq = load_raw_video(dir / "in", 7, 5, fmt);
    CHECK(seq.size() == 3);
    save_raw_video(dir / "out", seq.frames, fmt);
    CHECK(testing::read_file(dir / "in") == testing::read_file(dir / "out"));
    CHECK(parse_raw_format(raw_format_name(fmt)) == fmt);
  }
  CHECK(raw_frame_bytes(7, 5, RawFormat::kYuv420p8) == 35 + 2 * 4 * 3);
  CHECK_THROWS_AS(parse_raw_format("nv12"), std::invalid_argument);
}

TEST_CASE("pnm round trip") {
  TempDir dir;
  std::mt19937 rng(4);
  const Frame gray = testing::random_frame(6, 5, rng);
  write_pnm(dir / "g.pgm", gray);
  CHECK(read_pnm(dir / "g.pgm") == gray);
  const Frame color = testing::random_frame(3, 4, rng, 255, 3);
  write_pnm(dir / "c.ppm", color);
  CHECK(read_pnm(dir / "c.ppm") == color);
}

TEST_CASE("psnr examples") {
  const Frame zero = testing::constant_frame(8, 8, 0);
  const Frame full = testing::constant_frame(8, 8, 255);
  CHECK(is_infinite_psnr(psnr(zero, zero)));
  CHECK(psnr(zero, full) == doctest::Approx(0.0));
  const Frame one = testing::constant_frame(8, 8, 1);
  const double expected = 10.0 * std::log10(255.0 * 255.0);
  CHECK(psnr(zero, one) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(psnr(zero, one) - 48.13) < 0.01);
  CHECK_THROWS_AS(psnr(zero, testing::constant_frame(8, 4, 0)), std::invalid_argument);
}

TEST_CASE("psnr is symmetric and luma_only ignores chroma") {
  std::mt19937 rng(5);
  Frame a = testing::random_frame(8, 8, rng, 255, 3);
  Frame b = testing::random_frame(8, 8, rng, 255, 3);
  CHECK(psnr(a, b) == psnr(b, a));
  CHECK(psnr(a, b, ChannelPolicy::kAllChannels) == psnr(b, a, ChannelPolicy::kAllChannels));
  Frame c = a;
  for (Sample& s : c.plane(2)) s = static_cast<Sample>(255 - s);
  CHECK(is_infinite_psnr(psnr(a, c, ChannelPolicy::kLumaOnly)));
  CHECK_FALSE(is_infinite_psnr(psnr(a, c, ChannelPolicy::kAllChannels)));
}

TEST_CASE("sse_region examples") {
  Frame a = testing::constant_frame(2, 2, 10);
  Frame b = a;
  CHECK(sse_region(a, b, {0, 0, 2, 2}) == 0);
  b.at(0, 0, 0) = 11;
  b.at(0, 1, 0) = 12;
  b.at(0, 0, 1) = 13;
  b.at(0, 1, 1) = 14;
  CHECK(sse_region(a, b, {0, 0, 2, 2}) == 30);
  CHECK_THROWS_AS(sse_region(a, b, {1, 1, 2, 1}), std::invalid_argument);
}

TEST_CASE("sse_region matches the naive loop and is additive over tilings") {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Frame a = testing::random_frame(8, 8, rng);
    const Frame b = testing::random_frame(8, 8, rng);
    const Cuboid whole{0, 0, 8, 8};
    const std::uint64_t total = sse_region(a, b, whole);
    CHECK(total == oracle::pair_sse(a, b, whole));
    const int cx = 1 + static_cast<int>(rng() % 7);
    const int cy = 1 + static_cast<int>(rng() % 7);
    const std::uint64_t parts = sse_region(a, b, {0, 0, cx, cy}) + sse_region(a, b, {cx, 0, 8 - cx, cy}) +
                                sse_region(a, b, {0, cy, cx, 8 - cy}) +
                                sse_region(a, b, {cx, cy, 8 - cx, 8 - cy});
    CHECK(parts == total);
  }
}

TEST_CASE("sse_region has headroom for 16-bit 8K frames") {
  Frame a(7680, 4320, 1, Subsampling::k444, 16);
  Frame b(7680, 4320, 1, Subsampling::k444, 16);
  for (Sample& s : b.plane(0)) s = 65535;
  const std::uint64_t expected = 7680ull * 4320ull * 65535ull * 65535ull;
  CHECK(sse_region(a, b, {0, 0, 7680, 4320}) == expected);
}

TEST_CASE("map_to_plane rounds 4:2:0 edges up") {
  Frame f(9, 7, 3, Subsampling::k420);
  CHECK(map_to_plane(f, {0, 0, 9, 7}, 1) == Cuboid{0, 0, 5, 4});
  CHECK(map_to_plane(f, {3, 1, 2, 2}, 1) == Cuboid{2, 1, 1, 1});
  CHECK(map_to_plane(f, {3, 3, 1, 1}, 2).w == 0);
  CHECK(map_to_plane(f, {3, 3, 1, 1}, 0) == Cuboid{3, 3, 1, 1});
}

TEST_CASE("split_into_gops keeps order and the short tail") {
  Sequence seq;
  for (int i = 0; i < 7; ++i) seq.frames.push_back(testing::constant_frame(2, 2, static_cast<Sample>(i)));
  const auto gops = split_into_gops(seq, {3, 0});
  REQUIRE(gops.size() == 3);
  CHECK(gops[2].size() == 1);
  CHECK(gops[1][0].at(0, 0, 0) == 3);
  CHECK_THROWS_AS(split_into_gops(seq, {3, 1}), std::invalid_argument);
}

}  // TEST_SUITE
