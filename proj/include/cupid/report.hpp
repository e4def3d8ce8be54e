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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cupid/bd_metric.hpp"

namespace cupid {

struct ReportCurve {
  std::string label;
  std::vector<RDPoint> points;
  // Deltas against the first curve of the report.
  std::optional<BDResult> bd;
};

// CSV with an RD section ("label,rate,psnr") and, when any curve carries a
// BD result, a blank line and a summary section
// ("reference,test,bd_rate_percent,bd_psnr_db"). Numbers use 4 decimals.
std::string emit_report(const std::vector<ReportCurve>& curves);
std::vector<ReportCurve> parse_report(std::istream& in);

// Reads "rate,psnr" or "label,rate,psnr" rows; a non-numeric first line is
// taken as a header. Throws std::runtime_error on malformed rows.
std::vector<RDPoint> read_rd_curve(std::istream& in);

// Fixed 4-decimal formatting; infinity is written as "inf".
std::string format_number(double value);

}  // namespace cupid
