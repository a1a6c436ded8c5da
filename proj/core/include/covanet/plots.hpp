#pragma once

#include <string>
#include <vector>

#include "covanet/metrics.hpp"

namespace covanet {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line chart as a standalone SVG file.
void writeSvgLineChart(const std::string& path, const std::string& title,
                       const std::string& xLabel, const std::string& yLabel,
                       const std::vector<PlotSeries>& series);

/// Box-style latency summary (median and p95 bars per seed/agent).
void writeSvgLatencyChart(const std::string& path, const std::string& title,
                          const std::vector<LatencyCsvRow>& rows);

struct PlotOutputs {
  std::string collisionsSvg;
  std::string rewardSvg;
  std::string latencySvg;
  std::string collisionsCsv;
  std::string rewardCsv;
  std::string latencyCsv;
};

/// Read per_window.csv and latency.csv from `inDir` and write the three
/// charts plus the exact CSVs behind them (series,window_start,window_end,
/// value rows; per-seed series plus a "median" series).
PlotOutputs exportPlots(const std::string& inDir, const std::string& outDir);

}  // namespace covanet
