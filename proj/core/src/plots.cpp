#include "covanet/plots.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

namespace covanet {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Range {
  double lo{0.0};
  double hi{1.0};

  void expand(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double span() const { return hi - lo == 0.0 ? 1.0 : hi - lo; }
};

double mapX(double v, const Range& r) {
  return kMarginLeft +
         (v - r.lo) / r.span() * (kWidth - kMarginLeft - kMarginRight);
}

double mapY(double v, const Range& r) {
  return kHeight - kMarginBottom -
         (v - r.lo) / r.span() * (kHeight - kMarginTop - kMarginBottom);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

double medianOf(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

void writeSvgLineChart(const std::string& path, const std::string& title,
                       const std::string& xLabel, const std::string& yLabel,
                       const std::vector<PlotSeries>& series) {
  Range xr, yr;
  bool any = false;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!any) {
        xr = {s.x[i], s.x[i]};
        yr = {s.y[i], s.y[i]};
        any = true;
      } else {
        xr.expand(s.x[i]);
        yr.expand(s.y[i]);
      }
    }
  }

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << escape(title) << "</text>\n";
  // axes
  out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\""
      << kMarginLeft << "\" y2=\"" << kHeight - kMarginBottom
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kHeight - kMarginBottom
      << "\" x2=\"" << kWidth - kMarginRight << "\" y2=\""
      << kHeight - kMarginBottom << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(xLabel)
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << kHeight / 2 << ")\">" << escape(yLabel) << "</text>\n";
  if (any) {
    out << "<text x=\"" << kMarginLeft - 6 << "\" y=\""
        << kHeight - kMarginBottom + 4
        << "\" text-anchor=\"end\" font-size=\"10\">" << yr.lo << "</text>\n";
    out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << kMarginTop + 4
        << "\" text-anchor=\"end\" font-size=\"10\">" << yr.hi << "</text>\n";
    out << "<text x=\"" << kMarginLeft << "\" y=\""
        << kHeight - kMarginBottom + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << xr.lo
        << "</text>\n";
    out << "<text x=\"" << kWidth - kMarginRight << "\" y=\""
        << kHeight - kMarginBottom + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << xr.hi
        << "</text>\n";
  }
  int colorIdx = 0;
  int legendY = kMarginTop + 6;
  for (const auto& s : series) {
    const char* color = kPalette[colorIdx % 8];
    const bool isMedian = s.label == "median";
    if (s.x.size() == 1) {
      out << "<circle cx=\"" << mapX(s.x[0], xr) << "\" cy=\""
          << mapY(s.y[0], yr) << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    } else if (!s.x.empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
          << (isMedian ? 3 : 1) << "\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << mapX(s.x[i], xr) << ',' << mapY(s.y[i], yr) << ' ';
      }
      out << "\"/>\n";
    }
    out << "<text x=\"" << kWidth - kMarginRight - 110 << "\" y=\"" << legendY
        << "\" font-size=\"11\" fill=\"" << color << "\">" << escape(s.label)
        << "</text>\n";
    legendY += 14;
    ++colorIdx;
  }
  out << "</svg>\n";
}

void writeSvgLatencyChart(const std::string& path, const std::string& title,
                          const std::vector<LatencyCsvRow>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  Range yr{0.0, 1e-9};
  for (const auto& r : rows) yr.expand(r.p95Seconds);

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << escape(title) << "</text>\n";
  const double slot =
      rows.empty() ? 1.0
                   : static_cast<double>(kWidth - kMarginLeft - kMarginRight) /
                         static_cast<double>(rows.size());
  int i = 0;
  for (const auto& r : rows) {
    const double x = kMarginLeft + slot * (i + 0.25);
    const double w = slot * 0.5;
    const double yMedian = mapY(r.medianSeconds, yr);
    const double yP95 = mapY(r.p95Seconds, yr);
    const char* color = kPalette[i % 8];
    out << "<rect x=\"" << x << "\" y=\"" << yMedian << "\" width=\"" << w
        << "\" height=\"" << (kHeight - kMarginBottom - yMedian)
        << "\" fill=\"" << color << "\" fill-opacity=\"0.6\"/>\n";
    out << "<line x1=\"" << x << "\" y1=\"" << yP95 << "\" x2=\"" << x + w
        << "\" y2=\"" << yP95 << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << x + w / 2 << "\" y=\"" << kHeight - kMarginBottom + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">s" << r.seed << "/a"
        << r.advId << "</text>\n";
    ++i;
  }
  out << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << kHeight / 2 << ")\">seconds (bar median, tick p95)</text>\n";
  out << "</svg>\n";
}

namespace {

void writeSeriesCsv(const std::string& path,
                    const std::vector<PlotSeries>& series,
                    const std::vector<int>& windowEnds) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << "series,window_start,window_end,value\n";
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      out << s.label << ',' << static_cast<int>(s.x[i]) << ','
          << windowEnds[i] << ',' << formatDouble(s.y[i]) << '\n';
    }
  }
}

}  // namespace

PlotOutputs exportPlots(const std::string& inDir, const std::string& outDir) {
  namespace fs = std::filesystem;
  fs::create_directories(outDir);
  const auto rows = readPerWindowCsv((fs::path(inDir) / "per_window.csv").string());
  if (rows.empty()) throw ConfigError("per_window.csv holds no aggregates");

  std::set<std::uint64_t> seeds;
  std::set<int> starts;
  std::map<int, int> windowEndOf;
  for (const auto& r : rows) {
    seeds.insert(r.seed);
    starts.insert(r.windowStart);
    windowEndOf[r.windowStart] = r.windowEnd;
  }
  std::vector<int> windowEnds;
  for (int s : starts) windowEnds.push_back(windowEndOf[s]);

  auto buildSeries = [&](auto getter) {
    std::vector<PlotSeries> series;
    for (std::uint64_t seed : seeds) {
      PlotSeries s;
      s.label = "seed" + std::to_string(seed);
      for (const auto& r : rows) {
        if (r.seed != seed) continue;
        s.x.push_back(r.windowStart);
        s.y.push_back(getter(r));
      }
      series.push_back(std::move(s));
    }
    PlotSeries median;
    median.label = "median";
    for (int start : starts) {
      std::vector<double> vals;
      for (const auto& r : rows) {
        if (r.windowStart == start) vals.push_back(getter(r));
      }
      median.x.push_back(start);
      median.y.push_back(medianOf(vals));
    }
    series.push_back(std::move(median));
    return series;
  };

  const auto collisionSeries = buildSeries(
      [](const WindowCsvRow& r) { return static_cast<double>(r.collisionsSum); });
  const auto rewardSeries =
      buildSeries([](const WindowCsvRow& r) { return r.rewardPerAdv; });

  PlotOutputs outputs;
  const fs::path dir(outDir);
  outputs.collisionsSvg = (dir / "collisions.svg").string();
  outputs.rewardSvg = (dir / "reward.svg").string();
  outputs.latencySvg = (dir / "latency.svg").string();
  outputs.collisionsCsv = (dir / "plot_collisions.csv").string();
  outputs.rewardCsv = (dir / "plot_reward.csv").string();
  outputs.latencyCsv = (dir / "plot_latency.csv").string();

  writeSvgLineChart(outputs.collisionsSvg, "Collisions per 50-episode window",
                    "window start episode", "collisions", collisionSeries);
  writeSvgLineChart(outputs.rewardSvg, "Mean reward per agent per window",
                    "window start episode", "reward per agent", rewardSeries);
  writeSeriesCsv(outputs.collisionsCsv, collisionSeries, windowEnds);
  writeSeriesCsv(outputs.rewardCsv, rewardSeries, windowEnds);

  std::vector<LatencyCsvRow> latencyRows;
  const fs::path latencyIn = fs::path(inDir) / "latency.csv";
  if (fs::exists(latencyIn)) {
    latencyRows = readLatencyCsv(latencyIn.string());
  }
  writeSvgLatencyChart(outputs.latencySvg, "Action latency", latencyRows);
  {
    std::ofstream out(outputs.latencyCsv, std::ios::trunc);
    if (!out) throw IoError("cannot write " + outputs.latencyCsv);
    writeLatencyHeader(out);
    for (const auto& r : latencyRows) {
      out << r.seed << ',' << r.advId << ',' << r.samples << ','
          << formatDouble(r.medianSeconds) << ',' << formatDouble(r.p95Seconds)
          << '\n';
    }
  }
  return outputs;
}

}  // namespace covanet
