#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "covanet/common.hpp"
#include "covanet/reward.hpp"
#include "covanet/world.hpp"

namespace covanet {

/// Per-episode outcomes for the learning vehicles. `collisionsTotal` counts
/// each event involving at least one learning vehicle once; the per-vehicle
/// map attributes every event to the lowest-id learning vehicle involved, so
/// the per-vehicle counts sum exactly to the total.
struct EpisodeMetrics {
  int episode{0};
  std::map<VehicleId, double> reward;
  std::map<VehicleId, RewardBreakdown> breakdownSums;
  int collisionsTotal{0};
  std::map<VehicleId, int> collisions;
  std::map<VehicleId, bool> arrived;
  std::map<VehicleId, int> arrivalStep;  // -1 when not arrived
};

/// Fixed 50-episode windows; the last window may be shorter. Collisions are
/// summed; rewards are summed over the window and divided by the number of
/// learning vehicles.
struct WindowAggregate {
  int startEpisode{0};  // 1-based, inclusive
  int endEpisode{0};    // inclusive
  long collisionsSum{0};
  double rewardPerAdv{0.0};
};

inline constexpr int kWindowEpisodes = 50;

std::vector<WindowAggregate> aggregateWindows(
    const std::vector<EpisodeMetrics>& episodes, int numAdv,
    int windowLength = kWindowEpisodes);

struct LatencySummary {
  VehicleId advId{0};
  std::size_t samples{0};
  double medianSeconds{0.0};
  double p95Seconds{0.0};
};

LatencySummary summarizeLatency(VehicleId advId, std::vector<double> samples);

/// Round-trip exact formatting for CSV cells.
std::string formatDouble(double v);

// CSV schemas (fixed column order):
//   per-episode: seed,episode,adv_id,reward,collisions,arrived,arrival_step
//   per-window:  seed,window_start,window_end,collisions_sum,reward_per_adv
//   breakdown:   seed,episode,adv_id,c_sum,h_sum,o_sum
//   latency:     seed,adv_id,samples,median_s,p95_s
void writePerEpisodeHeader(std::ostream& out);
void writePerEpisodeRows(std::ostream& out, std::uint64_t seed,
                         const std::vector<EpisodeMetrics>& episodes);
void writePerWindowHeader(std::ostream& out);
void writePerWindowRows(std::ostream& out, std::uint64_t seed,
                        const std::vector<WindowAggregate>& windows);
void writeBreakdownHeader(std::ostream& out);
void writeBreakdownRows(std::ostream& out, std::uint64_t seed,
                        const std::vector<EpisodeMetrics>& episodes);
void writeLatencyHeader(std::ostream& out);
void writeLatencyRows(std::ostream& out, std::uint64_t seed,
                      const std::vector<LatencySummary>& summaries);

struct WindowCsvRow {
  std::uint64_t seed{0};
  int windowStart{0};
  int windowEnd{0};
  long collisionsSum{0};
  double rewardPerAdv{0.0};
};

std::vector<WindowCsvRow> readPerWindowCsv(const std::string& path);

struct LatencyCsvRow {
  std::uint64_t seed{0};
  VehicleId advId{0};
  std::size_t samples{0};
  double medianSeconds{0.0};
  double p95Seconds{0.0};
};

std::vector<LatencyCsvRow> readLatencyCsv(const std::string& path);

}  // namespace covanet
