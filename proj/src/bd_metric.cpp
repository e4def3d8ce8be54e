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

#include "cupid/bd_metric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cupid {

namespace {

void check_curve(std::span<const RDPoint> curve, const char* name) {
  if (curve.size() < 4) {
    throw std::invalid_argument(std::string(name) +
                                " curve needs at least 4 RD points for a cubic fit, got " +
                                std::to_string(curve.size()));
  }
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!(curve[i].rate > 0) || !std::isfinite(curve[i].rate) ||
        !std::isfinite(curve[i].psnr)) {
      throw std::invalid_argument(std::string(name) +
                                  " curve has a non-positive rate or non-finite value");
    }
    if (i > 0 && !(curve[i].rate > curve[i - 1].rate && curve[i].psnr > curve[i - 1].psnr)) {
      throw std::invalid_argument(std::string(name) +
                                  " curve must be strictly increasing in rate and PSNR");
    }
  }
}

// Mean of (g - f) over [lo, hi], trapezoidal rule.
double mean_difference(std::span<const double> f, std::span<const double> g, Interval iv) {
  const double h = (iv.hi - iv.lo) / kBdSamples;
  double acc = 0;
  for (int i = 0; i <= kBdSamples; ++i) {
    const double x = iv.lo + h * i;
    const double w = (i == 0 || i == kBdSamples) ? 0.5 : 1.0;
    acc += w * (polyval(g, x) - polyval(f, x));
  }
  return acc * h / (iv.hi - iv.lo);
}

}  // namespace

std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int degree) {
  if (x.size() != y.size() || x.size() < static_cast<std::size_t>(degree) + 1) {
    throw std::invalid_argument("polyfit: need at least degree + 1 matching samples");
  }
  Eigen::MatrixXd a(x.size(), degree + 1);
  Eigen::VectorXd b(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double p = 1;
    for (int d = 0; d <= degree; ++d) {
      a(static_cast<Eigen::Index>(i), d) = p;
      p *= x[i];
    }
    b(static_cast<Eigen::Index>(i)) = y[i];
  }
  const Eigen::VectorXd coeffs = a.colPivHouseholderQr().solve(b);
  return {coeffs.data(), coeffs.data() + coeffs.size()};
}

double polyval(std::span<const double> coeffs, double x) {
  double v = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
  return v;
}

BDResult bd_delta(std::span<const RDPoint> reference, std::span<const RDPoint> test) {
  check_curve(reference, "reference");
  check_curve(test, "test");

  auto columns = [](std::span<const RDPoint> c) {
    std::vector<double> log_rate, quality;
    for (const RDPoint& p : c) {
      log_rate.push_back(std::log10(p.rate));
      quality.push_back(p.psnr);
    }
    return std::pair{log_rate, quality};
  };
  const auto [ref_lr, ref_q] = columns(reference);
  const auto [test_lr, test_q] = columns(test);

  BDResult out;
  out.log_rate_overlap = {std::max(ref_lr.front(), test_lr.front()),
                          std::min(ref_lr.back(), test_lr.back())};
  out.psnr_overlap = {std::max(ref_q.front(), test_q.front()),
                      std::min(ref_q.back(), test_q.back())};
  if (!(out.log_rate_overlap.hi > out.log_rate_overlap.lo) ||
      !(out.psnr_overlap.hi > out.psnr_overlap.lo)) {
    throw std::invalid_argument("RD curves do not overlap");
  }

  const auto ref_quality = polyfit(ref_lr, ref_q, 3);
  const auto test_quality = polyfit(test_lr, test_q, 3);
  out.delta_psnr = mean_difference(ref_quality, test_quality, out.log_rate_overlap);

  const auto ref_rate = polyfit(ref_q, ref_lr, 3);
  const auto test_rate = polyfit(test_q, test_lr, 3);
  const double mean_log_diff = mean_difference(ref_rate, test_rate, out.psnr_overlap);
  out.delta_rate = (std::pow(10.0, mean_log_diff) - 1.0) * 100.0;
  return out;
}

}  // namespace cupid
