#include "covanet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace covanet {

std::vector<WindowAggregate> aggregateWindows(
    const std::vector<EpisodeMetrics>& episodes, int numAdv,
    int windowLength) {
  if (windowLength < 1) throw ContractViolation("window length must be >= 1");
  if (numAdv < 1) throw ContractViolation("window aggregation needs numAdv >= 1");
  std::vector<WindowAggregate> out;
  for (std::size_t begin = 0; begin < episodes.size();
       begin += static_cast<std::size_t>(windowLength)) {
    const std::size_t end =
        std::min(episodes.size(), begin + static_cast<std::size_t>(windowLength));
    WindowAggregate w;
    w.startEpisode = static_cast<int>(begin) + 1;
    w.endEpisode = static_cast<int>(end);
    double rewardSum = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      w.collisionsSum += episodes[i].collisionsTotal;
      for (const auto& [id, r] : episodes[i].reward) rewardSum += r;
    }
    w.rewardPerAdv = rewardSum / static_cast<double>(numAdv);
    out.push_back(w);
  }
  return out;
}

LatencySummary summarizeLatency(VehicleId advId, std::vector<double> samples) {
  LatencySummary s;
  s.advId = advId;
  s.samples = samples.size();
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(samples.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, samples.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return samples[lo] * (1.0 - frac) + samples[hi] * frac;
  };
  s.medianSeconds = quantile(0.5);
  s.p95Seconds = quantile(0.95);
  return s;
}

std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void writePerEpisodeHeader(std::ostream& out) {
  out << "seed,episode,adv_id,reward,collisions,arrived,arrival_step\n";
}

void writePerEpisodeRows(std::ostream& out, std::uint64_t seed,
                         const std::vector<EpisodeMetrics>& episodes) {
  for (const auto& ep : episodes) {
    for (const auto& [id, reward] : ep.reward) {
      out << seed << ',' << ep.episode << ',' << id << ','
          << formatDouble(reward) << ',' << ep.collisions.at(id) << ','
          << (ep.arrived.at(id) ? 1 : 0) << ',' << ep.arrivalStep.at(id)
          << '\n';
    }
  }
}

void writePerWindowHeader(std::ostream& out) {
  out << "seed,window_start,window_end,collisions_sum,reward_per_adv\n";
}

void writePerWindowRows(std::ostream& out, std::uint64_t seed,
                        const std::vector<WindowAggregate>& windows) {
  for (const auto& w : windows) {
    out << seed << ',' << w.startEpisode << ',' << w.endEpisode << ','
        << w.collisionsSum << ',' << formatDouble(w.rewardPerAdv) << '\n';
  }
}

void writeBreakdownHeader(std::ostream& out) {
  out << "seed,episode,adv_id,c_sum,h_sum,o_sum\n";
}

void writeBreakdownRows(std::ostream& out, std::uint64_t seed,
                        const std::vector<EpisodeMetrics>& episodes) {
  for (const auto& ep : episodes) {
    for (const auto& [id, b] : ep.breakdownSums) {
      out << seed << ',' << ep.episode << ',' << id << ','
          << formatDouble(b.collision) << ',' << formatDouble(b.time) << ','
          << formatDouble(b.onRoad) << '\n';
    }
  }
}

void writeLatencyHeader(std::ostream& out) {
  out << "seed,adv_id,samples,median_s,p95_s\n";
}

void writeLatencyRows(std::ostream& out, std::uint64_t seed,
                      const std::vector<LatencySummary>& summaries) {
  for (const auto& s : summaries) {
    out << seed << ',' << s.advId << ',' << s.samples << ','
        << formatDouble(s.medianSeconds) << ',' << formatDouble(s.p95Seconds)
        << '\n';
  }
}

namespace {

std::vector<std::string> splitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

std::vector<WindowCsvRow> readPerWindowCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  std::vector<WindowCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = splitCsvLine(line);
    if (cells.size() != 5) throw IoError(path + ": malformed row '" + line + "'");
    WindowCsvRow r;
    r.seed = std::stoull(cells[0]);
    r.windowStart = std::stoi(cells[1]);
    r.windowEnd = std::stoi(cells[2]);
    r.collisionsSum = std::stol(cells[3]);
    r.rewardPerAdv = std::stod(cells[4]);
    rows.push_back(r);
  }
  return rows;
}

std::vector<LatencyCsvRow> readLatencyCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  std::vector<LatencyCsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = splitCsvLine(line);
    if (cells.size() != 5) throw IoError(path + ": malformed row '" + line + "'");
    LatencyCsvRow r;
    r.seed = std::stoull(cells[0]);
    r.advId = std::stoi(cells[1]);
    r.samples = std::stoull(cells[2]);
    r.medianSeconds = std::stod(cells[3]);
    r.p95Seconds = std::stod(cells[4]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace covanet
