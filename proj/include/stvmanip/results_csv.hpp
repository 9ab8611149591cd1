#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "stvmanip/error.hpp"
#include "stvmanip/experiments.hpp"

namespace stvm {

inline constexpr std::array<std::string_view, 15> kResultsColumns = {
    "distribution", "b_param",     "m",           "n",        "weight",       "trials",     "p_manipulable", "stderr",
    "nodes_mean",   "nodes_median", "nodes_p90", "nodes_max", "time_mean_ms", "unresolved", "master_seed"};

/// Six significant digits, printf %g style.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string results_header() {
  std::string out;
  for (std::size_t i = 0; i < kResultsColumns.size(); ++i) {
    if (i) out += ',';
    out += kResultsColumns[i];
  }
  return out + '\n';
}

/// One CSV row. Wall-clock time is left empty unless `with_timing`, so that
/// reruns with the same seed are byte-identical.
inline std::string results_row(const PointResult& p, const GridConfig& cfg, bool with_timing) {
  std::ostringstream row;
  row << distribution_name(cfg.distribution) << ',' << format_number(distribution_param(cfg.distribution)) << ','
      << p.m << ',' << p.n << ',' << cfg.weight << ',' << p.trials << ',' << format_number(p.p_manipulable) << ','
      << format_number(p.stderr_p) << ',' << format_number(p.nodes_mean) << ',' << format_number(p.nodes_median)
      << ',' << format_number(p.nodes_p90) << ',' << format_number(p.nodes_max) << ','
      << (with_timing ? format_number(p.time_mean_ms) : std::string()) << ',' << p.unresolved << ','
      << cfg.master_seed << '\n';
  return row.str();
}

using CsvRow = std::map<std::string, std::string, std::less<>>;

/// Parses a results CSV; every row is keyed by the header names.
inline std::vector<CsvRow> parse_results_csv(std::string_view text) {
  auto split = [](std::string_view line) {
    std::vector<std::string> cells;
    std::size_t from = 0;
    for (;;) {
      const auto comma = line.find(',', from);
      cells.emplace_back(line.substr(from, comma == std::string_view::npos ? std::string_view::npos : comma - from));
      if (comma == std::string_view::npos) break;
      from = comma + 1;
    }
    return cells;
  };
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto cells = split(line);
    if (header.empty()) {
      header = std::move(cells);
      for (auto col : {"distribution", "m", "n", "nodes_mean"})
        if (std::find(header.begin(), header.end(), col) == header.end())
          throw ParseError(line_no, std::string("results CSV lacks column '") + col + "'");
      continue;
    }
    if (cells.size() != header.size())
      throw ParseError(line_no, "expected " + std::to_string(header.size()) + " cells, got " +
                                    std::to_string(cells.size()));
    CsvRow row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw ParseError(line_no, "empty results CSV");
  return rows;
}

struct SeriesFit {
  std::string distribution;
  std::string b_param;
  std::string n;
  std::string weight;
  std::size_t points = 0;
  FitResult fit;
};

/// Fits nodes_mean = a * b^m separately for every fixed-n series
/// (distribution, b_param, n, weight). Series with fewer than two distinct m
/// values are skipped.
inline std::vector<SeriesFit> fit_series(const std::vector<CsvRow>& rows) {
  auto cell = [](const CsvRow& r, std::string_view key) {
    const auto it = r.find(key);
    return it == r.end() ? std::string() : it->second;
  };
  std::map<std::array<std::string, 4>, std::vector<std::pair<double, double>>> groups;
  for (const auto& r : rows) {
    const double m = std::stod(cell(r, "m"));
    const double nodes = std::stod(cell(r, "nodes_mean"));
    groups[{cell(r, "distribution"), cell(r, "b_param"), cell(r, "n"), cell(r, "weight")}].emplace_back(m, nodes);
  }
  std::vector<SeriesFit> out;
  for (auto& [key, pts] : groups) {
    std::sort(pts.begin(), pts.end());
    if (pts.front().first == pts.back().first) continue;
    out.push_back({key[0], key[1], key[2], key[3], pts.size(), fit_exponential(pts)});
  }
  std::stable_sort(out.begin(), out.end(), [](const SeriesFit& a, const SeriesFit& b) {
    return std::tie(a.distribution, a.b_param, a.weight) < std::tie(b.distribution, b.b_param, b.weight) ||
           (std::tie(a.distribution, a.b_param, a.weight) == std::tie(b.distribution, b.b_param, b.weight) &&
            std::stod(a.n.empty() ? "0" : a.n) < std::stod(b.n.empty() ? "0" : b.n));
  });
  return out;
}

}  // namespace stvm
