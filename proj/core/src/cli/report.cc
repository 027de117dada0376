// Copyright 2026 The PolicyForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "policyforge/cli/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "policyforge/common/errors.h"
#include "policyforge/orchestrator/logs.h"

namespace policyforge::cli {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kIslandColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                         "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

double ParseNumber(const std::string& field, int row) {
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ConfigError("best_so_far.csv row " + std::to_string(row) + ": '" + field +
                      "' is not a number");
  }
  return v;
}

std::string Fixed(double v, int digits = 1) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string Escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

BestSoFarSeries ParseBestSoFar(std::string_view csv) {
  std::vector<std::string_view> lines;
  while (!csv.empty()) {
    const std::size_t nl = csv.find('\n');
    std::string_view line = csv.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    csv = nl == std::string_view::npos ? std::string_view() : csv.substr(nl + 1);
  }
  if (lines.empty()) throw ConfigError("best_so_far.csv is empty");
  const std::vector<std::string> header = orchestrator::SplitCsvLine(lines[0]);
  if (header.size() < 2 || header[0] != "generation" || header[1] != "global_best") {
    throw ConfigError("best_so_far.csv header must start with generation,global_best");
  }
  const std::size_t islands = header.size() - 2;
  for (std::size_t i = 0; i < islands; ++i) {
    if (header[i + 2] != "island_" + std::to_string(i)) {
      throw ConfigError("best_so_far.csv column " + std::to_string(i + 3) +
                        " should be island_" + std::to_string(i));
    }
  }
  if (lines.size() < 2) throw ConfigError("best_so_far.csv has no data rows");
  BestSoFarSeries series;
  series.island_best.resize(islands);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const int row = static_cast<int>(r) + 1;
    const std::vector<std::string> fields = orchestrator::SplitCsvLine(lines[r]);
    if (fields.size() != header.size()) {
      throw ConfigError("best_so_far.csv row " + std::to_string(row) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
    }
    const double g = ParseNumber(fields[0], row);
    if (g != std::floor(g) || !std::isfinite(g)) {
      throw ConfigError("best_so_far.csv row " + std::to_string(row) +
                        ": generation must be an integer");
    }
    series.generations.push_back(static_cast<int>(g));
    series.global_best.push_back(ParseNumber(fields[1], row));
    for (std::size_t i = 0; i < islands; ++i) {
      series.island_best[i].push_back(ParseNumber(fields[i + 2], row));
    }
  }
  return series;
}

std::string RenderBestSoFarSvg(const BestSoFarSeries& series) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto extend = [&](const std::vector<double>& ys) {
    for (double y : ys) {
      if (std::isfinite(y)) {
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
  };
  extend(series.global_best);
  for (const auto& ys : series.island_best) extend(ys);
  if (!std::isfinite(lo)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const int g0 = series.generations.empty() ? 0 : series.generations.front();
  const int g1 = series.generations.empty() ? 1 : series.generations.back();
  const double x_span = std::max(1, g1 - g0);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](int g) { return kLeft + plot_w * (g - g0) / x_span; };
  auto sy = [&](double y) { return kTop + plot_h * (hi - y) / (hi - lo); };

  auto polyline = [&](const std::vector<double>& ys, const std::string& style) {
    std::string points;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      if (!std::isfinite(ys[i])) continue;
      if (!points.empty()) points += ' ';
      points += Fixed(sx(series.generations[i]), 2) + "," + Fixed(sy(ys[i]), 2);
    }
    return "  <polyline fill=\"none\" " + style + " points=\"" + points + "\"/>\n";
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Fixed(kWidth, 0) +
         "\" height=\"" + Fixed(kHeight, 0) + "\" viewBox=\"0 0 " + Fixed(kWidth, 0) + " " +
         Fixed(kHeight, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "  <title>" + Escape("Best-so-far score") + "</title>\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes with five ticks each.
  svg += "  <g stroke=\"#333\" stroke-width=\"1\">\n";
  svg += "    <line x1=\"" + Fixed(kLeft) + "\" y1=\"" + Fixed(kTop + plot_h) + "\" x2=\"" +
         Fixed(kLeft + plot_w) + "\" y2=\"" + Fixed(kTop + plot_h) + "\"/>\n";
  svg += "    <line x1=\"" + Fixed(kLeft) + "\" y1=\"" + Fixed(kTop) + "\" x2=\"" + Fixed(kLeft) +
         "\" y2=\"" + Fixed(kTop + plot_h) + "\"/>\n";
  svg += "  </g>\n  <g fill=\"#333\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = lo + (hi - lo) * i / 4.0;
    svg += "    <text x=\"" + Fixed(kLeft - 6) + "\" y=\"" + Fixed(sy(y) + 4) +
           "\" text-anchor=\"end\">" + Fixed(y) + "</text>\n";
    const double g = g0 + x_span * i / 4.0;
    svg += "    <text x=\"" + Fixed(kLeft + plot_w * i / 4.0) + "\" y=\"" +
           Fixed(kTop + plot_h + 18) + "\" text-anchor=\"middle\">" + Fixed(g, 0) + "</text>\n";
  }
  svg += "    <text x=\"" + Fixed(kLeft + plot_w / 2) + "\" y=\"" + Fixed(kHeight - 15) +
         "\" text-anchor=\"middle\">generation</text>\n";
  svg += "    <text x=\"20\" y=\"" + Fixed(kTop + plot_h / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " + Fixed(kTop + plot_h / 2) +
         ")\">best-so-far score</text>\n";
  svg += "  </g>\n";

  const std::size_t n_colors = std::size(kIslandColors);
  for (std::size_t i = 0; i < series.island_best.size(); ++i) {
    svg += polyline(series.island_best[i],
                    "class=\"island\" stroke=\"" + std::string(kIslandColors[i % n_colors]) +
                        "\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"");
  }
  svg += polyline(series.global_best, "class=\"global\" stroke=\"black\" stroke-width=\"2.5\"");

  // Legend.
  double ly = kTop + 10;
  const double lx = kLeft + plot_w + 20;
  svg += "  <g>\n";
  svg += "    <line x1=\"" + Fixed(lx) + "\" y1=\"" + Fixed(ly) + "\" x2=\"" + Fixed(lx + 30) +
         "\" y2=\"" + Fixed(ly) + "\" stroke=\"black\" stroke-width=\"2.5\"/>\n";
  svg += "    <text x=\"" + Fixed(lx + 36) + "\" y=\"" + Fixed(ly + 4) + "\">global</text>\n";
  for (std::size_t i = 0; i < series.island_best.size(); ++i) {
    ly += 18;
    svg += "    <line x1=\"" + Fixed(lx) + "\" y1=\"" + Fixed(ly) + "\" x2=\"" + Fixed(lx + 30) +
           "\" y2=\"" + Fixed(ly) + "\" stroke=\"" + kIslandColors[i % n_colors] +
           "\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
    svg += "    <text x=\"" + Fixed(lx + 36) + "\" y=\"" + Fixed(ly + 4) + "\">island " +
           std::to_string(i) + "</text>\n";
  }
  svg += "  </g>\n</svg>\n";
  return svg;
}

}  // namespace policyforge::cli
