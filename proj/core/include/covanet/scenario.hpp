#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "covanet/ddpg.hpp"
#include "covanet/dist.hpp"
#include "covanet/reward.hpp"
#include "covanet/track.hpp"
#include "covanet/vanet.hpp"
#include "covanet/world.hpp"

namespace covanet {

/// Scripted traffic controller gains.
struct NdvConfig {
  double steerTrackPosGain{0.4};
  double steerAngleGain{1.2};
  double speedGain{0.1};  // pedal per km/h of speed error
  double targetSpeedMinKmh{40.0};
  double targetSpeedMaxKmh{60.0};
};

enum class TrackShape { Circle, Stadium };

struct TrackConfig {
  TrackShape shape{TrackShape::Stadium};
  double lengthM{800.0};
  double widthM{12.0};
  double straightM{150.0};  // stadium straights

  Track build() const;
};

/// Everything one experiment needs. Loadable from a plain-text key=value
/// file; unknown keys are rejected. See scenarioKeyTable() for the full key
/// list with defaults.
struct ScenarioConfig {
  int numAdv{2};
  int numNdv{3};
  TrackConfig track;
  DynamicsConfig dynamics;
  GridConfig grid;
  TerminationConfig termination;
  int episodes{300};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  VanetConfig vanet;
  double vanetBudget{1e9};  // initial resource units per agent, per episode
  bool topologyDump{false};
  RewardConfig reward;
  TrainingConfig training;
  DistributionPolicy distribution;
  NdvConfig ndv;

  /// Throws ConfigError on inconsistent values. Training runs additionally
  /// require at least one learning vehicle.
  void validate(bool trainingRun) const;
};

ScenarioConfig parseScenario(std::istream& in);
ScenarioConfig loadScenarioFile(const std::string& path);

/// One line per key: "key<TAB>default<TAB>description".
std::string scenarioKeyTable();

}  // namespace covanet
