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

namespace cupid::detail {

// 128-bit integer carrying a long double shadow. Once an operation overflows
// the exact value is dropped and only the shadow remains.
struct Wide {
  __int128 value = 0;
  long double approx = 0;
  bool exact = true;

  static Wide of(std::int64_t v) { return Wide{v, static_cast<long double>(v), true}; }
  static Wide of_unsigned(std::uint64_t v) {
    return Wide{static_cast<__int128>(v), static_cast<long double>(v), true};
  }
};

inline Wide operator*(const Wide& a, const Wide& b) {
  Wide r{0, a.approx * b.approx, a.exact && b.exact};
  if (r.exact && __builtin_mul_overflow(a.value, b.value, &r.value)) r.exact = false;
  return r;
}

inline Wide operator+(const Wide& a, const Wide& b) {
  Wide r{0, a.approx + b.approx, a.exact && b.exact};
  if (r.exact && __builtin_add_overflow(a.value, b.value, &r.value)) r.exact = false;
  if (r.exact) r.approx = static_cast<long double>(r.value);
  return r;
}

inline Wide operator-(const Wide& a, const Wide& b) {
  Wide r{0, a.approx - b.approx, a.exact && b.exact};
  if (r.exact && __builtin_sub_overflow(a.value, b.value, &r.value)) r.exact = false;
  if (r.exact) r.approx = static_cast<long double>(r.value);
  return r;
}

// num / den with den > 0.
struct Ratio {
  Wide num;
  Wide den;

  long double value() const {
    if (num.exact && den.exact) {
      return static_cast<long double>(num.value) / static_cast<long double>(den.value);
    }
    return num.approx / den.approx;
  }
};

// Three-way comparison; exact whenever the cross products fit in 128 bits.
inline int compare(const Ratio& a, const Ratio& b) {
  const Wide lhs = a.num * b.den;
  const Wide rhs = b.num * a.den;
  if (lhs.exact && rhs.exact) {
    return lhs.value < rhs.value ? -1 : (lhs.value > rhs.value ? 1 : 0);
  }
  const long double x = a.value();
  const long double y = b.value();
  return x < y ? -1 : (x > y ? 1 : 0);
}

}  // namespace cupid::detail
