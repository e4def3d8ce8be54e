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

#include <span>
#include <vector>

namespace cupid {

struct RDPoint {
  double rate = 0;  // bits or kbps; only ratios matter
  double psnr = 0;  // dB
};

struct Interval {
  double lo = 0;
  double hi = 0;
};

struct BDResult {
  double delta_rate = 0;    // percent; negative means the test curve is cheaper
  double delta_psnr = 0;    // dB; positive means the test curve is better
  Interval psnr_overlap;    // integration interval for delta_rate
  Interval log_rate_overlap;  // log10(rate) interval for delta_psnr
};

inline constexpr int kBdSamples = 1000;

// Bjontegaard deltas of `test` against `reference`: cubic least-squares fits
// (PSNR over log10 rate and vice versa), averaged over the overlapping
// interval with trapezoidal integration on kBdSamples intervals. Both curves
// need >= 4 points, strictly increasing in rate and PSNR, all finite.
BDResult bd_delta(std::span<const RDPoint> reference, std::span<const RDPoint> test);

// Least-squares polynomial coefficients, lowest order first.
std::vector<double> polyfit(std::span<const double> x, std::span<const double> y,
                            int degree);
double polyval(std::span<const double> coeffs, double x);

}  // namespace cupid
