#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "stvmanip/error.hpp"
#include "stvmanip/experiments.hpp"
#include "stvmanip/results_csv.hpp"

namespace stvm {

/// Fixed-width text table, one row per point.
inline std::string summarize(std::span<const PointResult> results) {
  if (results.empty()) throw Error("nothing to summarize");
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%6s %6s %8s %8s %12s %10s %10s %10s %10s\n", "m", "n", "p_manip", "stderr",
                "nodes_mean", "median", "p90", "max", "unresolved");
  out << line;
  for (const auto& p : results) {
    std::snprintf(line, sizeof line, "%6zu %6zu %8.4f %8.4f %12.6g %10.6g %10.6g %10.6g %10zu\n", p.m, p.n,
                  p.p_manipulable, p.stderr_p, p.nodes_mean, p.nodes_median, p.nodes_p90, p.nodes_max, p.unresolved);
    out << line;
  }
  return out.str();
}

struct ChartSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  bool log_y = false;
  std::vector<ChartSeries> series;
};

/// A self-contained SVG line chart. Log axes are base 2 (x) and base 10 (y).
inline std::string line_chart_svg(const ChartSpec& spec) {
  constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
  auto tx = [&](double x) { return spec.log_x ? std::log2(x) : x; };
  auto ty = [&](double y) { return spec.log_y ? std::log10(std::max(y, 1e-12)) : y; };

  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : spec.series)
    for (const auto& [x, y] : s.points) {
      x0 = std::min(x0, tx(x));
      x1 = std::max(x1, tx(x));
      y0 = std::min(y0, ty(y));
      y1 = std::max(y1, ty(y));
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!spec.log_y) y0 = std::min(y0, 0.0);
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double x) { return kLeft + (tx(x) - x0) / (x1 - x0) * (kW - kLeft - kRight); };
  auto py = [&](double y) { return kH - kBottom - (ty(y) - y0) / (y1 - y0) * (kH - kTop - kBottom); };

  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<title>" << spec.title << "</title>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\">" << spec.title << "</text>\n";
  svg << "<line class=\"axis\" x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight << "\" y2=\""
      << kH - kBottom << "\" stroke=\"black\"/>\n";
  svg << "<line class=\"axis\" x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kH - kBottom << "\" stroke=\"black\"/>\n";
  svg << "<text class=\"x-label\" x=\"" << (kLeft + kW - kRight) / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\">" << spec.x_label << (spec.log_x ? " (log scale)" : "") << "</text>\n";
  svg << "<text class=\"y-label\" transform=\"translate(16," << (kTop + kH - kBottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << spec.y_label << (spec.log_y ? " (log scale)" : "")
      << "</text>\n";
  char buf[64];
  for (int i = 0; i <= 4; ++i) {
    const double v = y0 + (y1 - y0) * i / 4;
    std::snprintf(buf, sizeof buf, "%.3g", spec.log_y ? std::pow(10.0, v) : v);
    const double y = kH - kBottom - (v - y0) / (y1 - y0) * (kH - kTop - kBottom);
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << buf << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = x0 + (x1 - x0) * i / 4;
    std::snprintf(buf, sizeof buf, "%.3g", spec.log_x ? std::exp2(v) : v);
    const double x = kLeft + (v - x0) / (x1 - x0) * (kW - kLeft - kRight);
    svg << "<text x=\"" << x << "\" y=\"" << kH - kBottom + 16 << "\" text-anchor=\"middle\">" << buf << "</text>\n";
  }
  for (std::size_t i = 0; i < spec.series.size(); ++i) {
    const auto& s = spec.series[i];
    const char* color = kColors[i % std::size(kColors)];
    svg << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : s.points) svg << px(x) << ',' << py(y) << ' ';
    svg << "\"/>\n";
    svg << "<text x=\"" << kW - kRight + 10 << "\" y=\"" << kTop + 16 * i << "\" fill=\"" << color << "\">" << s.label
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

/// Writes probability and mean-node charts against m (one line per fixed n)
/// and against n (one line per fixed m), skipping an axis with a single
/// value. Returns the files written.
inline std::vector<std::filesystem::path> write_charts(std::span<const PointResult> results,
                                                       const std::filesystem::path& dir, const std::string& caption) {
  std::filesystem::create_directories(dir);
  std::map<std::size_t, ChartSeries> by_n, by_m;
  std::map<std::size_t, ChartSeries> nodes_by_n, nodes_by_m;
  for (const auto& p : results) {
    by_n[p.n].label = "n=" + std::to_string(p.n);
    by_n[p.n].points.emplace_back(p.m, p.p_manipulable);
    nodes_by_n[p.n].label = by_n[p.n].label;
    nodes_by_n[p.n].points.emplace_back(p.m, p.nodes_mean);
    by_m[p.m].label = "m=" + std::to_string(p.m);
    by_m[p.m].points.emplace_back(p.n, p.p_manipulable);
    nodes_by_m[p.m].label = by_m[p.m].label;
    nodes_by_m[p.m].points.emplace_back(p.n, p.nodes_mean);
  }
  auto collect = [](std::map<std::size_t, ChartSeries>& m) {
    std::vector<ChartSeries> out;
    for (auto& [k, s] : m) {
      std::sort(s.points.begin(), s.points.end());
      out.push_back(std::move(s));
    }
    return out;
  };
  std::vector<std::pair<std::string, ChartSpec>> charts;
  const std::string suffix = caption.empty() ? "" : " [" + caption + "]";
  if (by_m.size() > 1) {
    charts.push_back({"probability_vs_m.svg",
                      {"Manipulability vs candidates" + suffix, "candidates m",
                       "probability of making a random candidate win", true, false, collect(by_n)}});
    charts.push_back({"nodes_vs_m.svg",
                      {"Search cost vs candidates" + suffix, "candidates m", "mean nodes explored", true, true,
                       collect(nodes_by_n)}});
  }
  if (by_n.size() > 1) {
    charts.push_back({"probability_vs_n.svg",
                      {"Manipulability vs agents" + suffix, "agents n",
                       "probability of making a random candidate win", true, false, collect(by_m)}});
    charts.push_back({"nodes_vs_n.svg",
                      {"Search cost vs agents" + suffix, "agents n", "mean nodes explored", true, true,
                       collect(nodes_by_m)}});
  }
  std::vector<std::filesystem::path> written;
  for (const auto& [name, spec] : charts) {
    const auto path = dir / name;
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path.string());
    f << line_chart_svg(spec);
    written.push_back(path);
  }
  return written;
}

}  // namespace stvm
