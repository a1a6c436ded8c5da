#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "covanet/agent.hpp"
#include "covanet/metrics.hpp"
#include "covanet/scenario.hpp"

namespace covanet {

enum class RunMode { Train, Eval };

struct RunOptions {
  RunMode mode{RunMode::Train};
  std::string outDir;  // empty runs in memory only
  int jobs{1};         // parallel seed workers; output is merge-order stable
  std::string actorCheckpoint;   // eval: applied to every learning vehicle
  std::string criticCheckpoint;  // eval: optional
  DiagnosticSink diagnostics;    // defaults to stderr
};

struct SeedResult {
  std::uint64_t seed{0};
  std::vector<EpisodeMetrics> episodes;
  std::vector<WindowAggregate> windows;
  std::vector<LatencySummary> latency;
  std::uint64_t groundTruthReads{0};  // audited absolute-state reads
};

struct ExperimentResult {
  std::vector<SeedResult> perSeed;
};

/// Scripted traffic: proportional steering back to the centerline plus a
/// cruise-speed regulator. Off the track it coasts straight.
Action ndvPolicy(const SensorFrame& frame, double targetKmh,
                 const NdvConfig& cfg);

struct TimedAction {
  Action action;
  std::vector<float> state;
  double seconds{0.0};
};

/// Flatten the frame and query the policy, timing the whole span from state
/// availability to action emission on the monotonic clock.
TimedAction timedAct(Agent& agent, const SensorFrame& frame, bool withNoise);

/// Convenience wrapper returning only the wall-clock seconds.
double measureLatency(Agent& agent, const SensorFrame& frame);

/// Exploration scale for an episode index under linear annealing.
double annealedSigma(const TrainingConfig& cfg, int episode, int episodes);

/// 1-based index of the first window with zero collisions; windows.size()+1
/// when no window qualifies.
int firstZeroCollisionWindow(const std::vector<WindowAggregate>& windows);

SeedResult runSeed(const ScenarioConfig& cfg, std::uint64_t seed,
                   const RunOptions& opts);

/// Run every seed of the scenario and, when outDir is set, write the metric
/// files: per_episode.csv, per_window.csv, breakdown.csv, latency.csv,
/// summary_windows.csv, optional topology.csv, and (training) checkpoints/.
ExperimentResult runExperiment(const ScenarioConfig& cfg,
                               const RunOptions& opts);

}  // namespace covanet
