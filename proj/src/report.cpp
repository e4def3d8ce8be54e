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

#include "cupid/report.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace cupid {

namespace {

constexpr const char* kRdHeader = "label,rate,psnr";
constexpr const char* kBdHeader = "reference,test,bd_rate_percent,bd_psnr_db";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  if (t == "inf") {
    out = INFINITY;
    return true;
  }
  std::size_t used = 0;
  try {
    out = std::stod(t, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == t.size();
}

double require_double(const std::string& text, int line_no) {
  double v = 0;
  if (!parse_double(text, v)) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": '" + trim(text) +
                             "' is not a number");
  }
  return v;
}

void check_label(const std::string& label) {
  if (label.find_first_of(",\n\r") != std::string::npos) {
    throw std::invalid_argument("report labels may not contain commas or newlines");
  }
}

}  // namespace

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

std::string emit_report(const std::vector<ReportCurve>& curves) {
  std::ostringstream out;
  out << kRdHeader << '\n';
  bool any_bd = false;
  for (const auto& c : curves) {
    check_label(c.label);
    for (const RDPoint& p : c.points) {
      out << c.label << ',' << format_number(p.rate) << ',' << format_number(p.psnr) << '\n';
    }
    any_bd = any_bd || c.bd.has_value();
  }
  if (any_bd) {
    out << '\n' << kBdHeader << '\n';
    for (const auto& c : curves) {
      if (!c.bd) continue;
      out << curves.front().label << ',' << c.label << ',' << format_number(c.bd->delta_rate)
          << ',' << format_number(c.bd->delta_psnr) << '\n';
    }
  }
  return out.str();
}

std::vector<ReportCurve> parse_report(std::istream& in) {
  std::vector<ReportCurve> curves;
  auto curve_for = [&](const std::string& label) -> ReportCurve& {
    for (auto& c : curves) {
      if (c.label == label) return c;
    }
    curves.push_back(ReportCurve{label, {}, std::nullopt});
    return curves.back();
  };

  std::string line;
  int line_no = 0;
  bool in_bd = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line == kRdHeader) continue;
    if (line == kBdHeader) {
      in_bd = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (!in_bd) {
      if (fields.size() != 3) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": expected 3 fields");
      }
      curve_for(fields[0]).points.push_back(
          RDPoint{require_double(fields[1], line_no), require_double(fields[2], line_no)});
    } else {
      if (fields.size() != 4) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": expected 4 fields");
      }
      BDResult bd;
      bd.delta_rate = require_double(fields[2], line_no);
      bd.delta_psnr = require_double(fields[3], line_no);
      curve_for(fields[1]).bd = bd;
    }
  }
  return curves;
}

std::vector<RDPoint> read_rd_curve(std::istream& in) {
  std::vector<RDPoint> points;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) {
      // A blank line ends the RD section of a report file.
      if (!points.empty()) break;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != 2 && fields.size() != 3) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected 'rate,psnr' or 'label,rate,psnr'");
    }
    const std::size_t base = fields.size() - 2;
    double rate = 0, quality = 0;
    if (!parse_double(fields[base], rate) || !parse_double(fields[base + 1], quality)) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw std::runtime_error("line " + std::to_string(line_no) + ": non-numeric RD values");
    }
    first = false;
    points.push_back(RDPoint{rate, quality});
  }
  return points;
}

}  // namespace cupid
