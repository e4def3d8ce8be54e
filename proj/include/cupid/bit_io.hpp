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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cupid {

// Bit sequence packed MSB-first into bytes. Pad bits in the last byte are
// zero and not counted in bit_count.
struct Bitstream {
  std::vector<std::uint8_t> bytes;
  std::size_t bit_count = 0;

  friend bool operator==(const Bitstream&, const Bitstream&) = default;
};

class BitWriter {
 public:
  void put_bit(bool bit) {
    if (stream_.bit_count % 8 == 0) stream_.bytes.push_back(0);
    if (bit) stream_.bytes.back() |= static_cast<std::uint8_t>(0x80u >> (stream_.bit_count % 8));
    ++stream_.bit_count;
  }

  // Writes the low `width` bits of value, most significant first.
  void put_bits(std::uint32_t value, int width) {
    for (int i = width - 1; i >= 0; --i) put_bit((value >> i) & 1u);
  }

  const Bitstream& stream() const { return stream_; }
  Bitstream take() { return std::move(stream_); }

 private:
  Bitstream stream_;
};

class BitstreamExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BitReader {
 public:
  explicit BitReader(const Bitstream& stream) : stream_(stream) {}

  bool get_bit() {
    if (pos_ >= stream_.bit_count) {
      throw BitstreamExhausted("bitstream exhausted at bit " + std::to_string(pos_));
    }
    const bool bit = (stream_.bytes[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
    ++pos_;
    return bit;
  }

  std::uint32_t get_bits(int width) {
    std::uint32_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | (get_bit() ? 1u : 0u);
    return v;
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return stream_.bit_count - pos_; }

 private:
  const Bitstream& stream_;
  std::size_t pos_ = 0;
};

// ceil(log2(n)) for n >= 1; 0 for n <= 1.
constexpr int ceil_log2(std::uint64_t n) {
  int bits = 0;
  while (bits < 64 && (std::uint64_t{1} << bits) < n) ++bits;
  return bits;
}

}  // namespace cupid
