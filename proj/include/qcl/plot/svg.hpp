#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace qcl::plot {

namespace detail {

struct Point2 {
  double q;
  double value;
};

inline constexpr double kWidth = 640, kHeight = 420;
inline constexpr double kLeft = 70, kRight = 150, kTop = 30, kBottom = 50;
inline constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

inline std::string num(double v) { return fmt::format("{:.2f}", v); }

}  // namespace detail

// Log-log SVG of success (or advantage) against q, one series per N, with the
// fitted cubic envelope c q^3 / N drawn over every series that has at least
// two points. Returns nothing when the report has no plottable rows.
inline std::optional<std::string> emit_plot(const nlohmann::json& report) {
  using namespace detail;
  if (!report.contains("rows") || !report["rows"].is_array()) return std::nullopt;
  const std::string field = report.value("kind", "sweep") == "advantage" ? "advantage" : "success_rate";
  std::map<std::uint64_t, std::vector<Point2>> series;
  for (const auto& row : report["rows"]) {
    const double v = row.value(field, row.value("success_rate", 0.0));
    const double q = row.value("q", 0.0);
    if (v <= 0.0 || q <= 0.0) continue;
    series[row.value("N", std::uint64_t{0})].push_back({q, v});
  }
  if (series.empty()) return std::nullopt;
  const double c = report.value("envelope_fit", 0.0);

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [n, pts] : series) {
    for (const auto& p : pts) {
      xmin = std::min(xmin, std::log10(p.q));
      xmax = std::max(xmax, std::log10(p.q));
      ymin = std::min(ymin, std::log10(p.value));
      ymax = std::max(ymax, std::log10(p.value));
    }
  }
  xmin = std::floor(xmin * 10) / 10 - 0.05;
  xmax = std::ceil(xmax * 10) / 10 + 0.05;
  ymin = std::floor(ymin) - 0.0;
  ymax = std::min(0.0, std::ceil(ymax)) < ymax ? std::ceil(ymax) : std::max(std::ceil(ymax), ymin + 1);
  if (ymax <= ymin) ymax = ymin + 1;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double lq) { return kLeft + (lq - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double lv) { return kTop + (ymax - lv) / (ymax - ymin) * ph; };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      static_cast<int>(kWidth), static_cast<int>(kHeight));
  svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", static_cast<int>(kWidth),
                     static_cast<int>(kHeight));
  svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", num(kLeft),
                     num(kTop), num(pw), num(ph));
  // Decade ticks on y, and q ticks at 1, 2, 5 x 10^k on x.
  for (int d = static_cast<int>(ymin); d <= static_cast<int>(ymax); ++d) {
    const double y = sy(d);
    svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ddd\"/>\n", num(kLeft), num(y),
                       num(kLeft + pw), num(y));
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">1e{}</text>\n", num(kLeft - 6),
                       num(y + 4), d);
  }
  for (int k = -1; k <= 6; ++k) {
    for (int m : {1, 2, 5}) {
      const double lq = std::log10(m * std::pow(10.0, k));
      if (lq < xmin || lq > xmax) continue;
      const double x = sx(lq);
      svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ddd\"/>\n", num(x), num(kTop), num(x),
                         num(kTop + ph));
      svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n", num(x),
                         num(kTop + ph + 16), fmt::format("{:g}", m * std::pow(10.0, k)));
    }
  }
  svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">queries q</text>\n",
                     num(kLeft + pw / 2), num(kHeight - 10));
  svg += fmt::format(
      "<text x=\"16\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
      num(kTop + ph / 2), num(kTop + ph / 2), field == "advantage" ? "advantage" : "success rate");

  std::size_t idx = 0;
  for (const auto& [n, pts] : series) {
    const char* color = kPalette[idx % kPalette.size()];
    if (pts.size() >= 2 && c > 0.0 && n > 0) {
      double lo = 1e300, hi = -1e300;
      for (const auto& p : pts) {
        lo = std::min(lo, p.q);
        hi = std::max(hi, p.q);
      }
      std::string path;
      constexpr int kSteps = 24;
      for (int s = 0; s <= kSteps; ++s) {
        const double lq = std::log10(lo) + (std::log10(hi) - std::log10(lo)) * s / kSteps;
        const double lv = std::log10(c) + 3.0 * lq - std::log10(static_cast<double>(n));
        if (lv < ymin || lv > ymax) continue;
        path += fmt::format("{}{},{} ", path.empty() ? "M" : "L", num(sx(lq)), num(sy(lv)));
      }
      if (!path.empty()) {
        path.pop_back();
        svg += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-dasharray=\"4 3\"/>\n", path, color);
      }
    }
    for (const auto& p : pts) {
      svg += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n", num(sx(std::log10(p.q))),
                         num(sy(std::log10(p.value))), color);
    }
    const double ly = kTop + 14 + 18 * static_cast<double>(idx);
    svg += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{}\"/>\n", num(kWidth - kRight + 16), num(ly - 4), color);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">N={}</text>\n", num(kWidth - kRight + 26), num(ly), n);
    ++idx;
  }
  if (c > 0.0) {
    const double ly = kTop + 14 + 18 * static_cast<double>(idx);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\">- - c q^3/N, c={}</text>\n", num(kWidth - kRight + 10),
                       num(ly), fmt::format("{:.3f}", c));
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace qcl::plot
