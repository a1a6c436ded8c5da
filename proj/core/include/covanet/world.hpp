#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "covanet/common.hpp"
#include "covanet/sensor.hpp"
#include "covanet/track.hpp"
#include "covanet/vehicle.hpp"

namespace covanet {

struct DynamicsConfig {
  double dt{0.1};               // s
  double accelGain{3.0};        // m/s^2 at full throttle
  double brakeGain{8.0};        // m/s^2 at full brake
  double dragCoeff{0.0005};     // m^-1, quadratic drag on speed
  double wheelbase{2.6};        // m
  double maxWheelAngle{kMaxWheelAngleRad};
  double footprintRadius{2.0};  // m, collision circle
};

struct TerminationConfig {
  int maxSteps{1000};      // T
  int reversalSteps{10};   // K consecutive steps with |psi| > pi/2
  int offTrackGrace{50};   // G steps of grace beyond the edge
};

struct GridConfig {
  double startS{5.0};
  double spacing{25.0};         // same-lane longitudinal gap, m
  double laneOffsetFrac{0.5};   // lane offset as a fraction of half-width
  double speedMinKmh{40.0};
  double speedMaxKmh{60.0};
};

enum class TerminationReason { None, Reversal, OffTrack, Arrival, Time };

struct VehicleVerdict {
  VehicleId id{0};
  TerminationReason reason{TerminationReason::None};
};

/// Either a vehicle pair overlap or an off-track excursion; one event per
/// contiguous interval.
struct CollisionEvent {
  static constexpr VehicleId kOffTrack = -1;
  VehicleId a{0};
  VehicleId b{kOffTrack};  // kOffTrack marks an off-track event for `a`
  int step{0};
  int episode{0};

  bool isOffTrack() const { return b == kOffTrack; }
  bool involves(VehicleId id) const { return a == id || (!isOffTrack() && b == id); }
};

/// Closed-loop 2D track world. One instance is single-threaded; independent
/// worlds may run concurrently.
class World {
 public:
  World(Track track, DynamicsConfig dyn, TerminationConfig term, GridConfig grid);

  VehicleId addVehicle(VehicleKind kind);
  std::size_t vehicleCount() const { return vehicles_.size(); }

  /// Place all vehicles on the starting grid (two lanes, alternating) with
  /// per-vehicle initial speeds drawn from the configured range. Clears all
  /// per-episode state. Identical seeds give identical worlds.
  void resetEpisode(std::uint64_t seed);

  /// Place one vehicle directly; scenario setup and test use.
  void teleport(VehicleId id, double s, double dLat, double psi, double vKmh);

  /// Advance every alive vehicle by one dt using its action. Throws
  /// ContractViolation when an alive vehicle has no action or an action is
  /// not finite.
  void step(const std::map<VehicleId, Action>& actions);

  /// Observation for an alive vehicle.
  SensorFrame sense(VehicleId id) const;

  /// Collision events that started at the current step: vehicle pairs whose
  /// center distance dropped below twice the footprint radius, and vehicles
  /// that crossed the track edge. Contiguous overlaps report once.
  std::vector<CollisionEvent> checkCollisionRadius();

  /// Per-vehicle termination verdicts at step t of an episode capped at
  /// maxSteps. Only alive vehicles are judged.
  std::vector<VehicleVerdict> verdicts(int t) const;

  void despawn(VehicleId id);

  int currentStep() const { return step_; }
  int currentEpisode() const { return episode_; }
  const Track& track() const { return track_; }
  const DynamicsConfig& dynamics() const { return dyn_; }
  const TerminationConfig& termination() const { return term_; }

  bool isAlive(VehicleId id) const;
  VehicleKind kindOf(VehicleId id) const;
  std::vector<VehicleId> aliveIds() const;

  /// Relative center distance between two alive vehicles when within sensing
  /// range; the only inter-vehicle geometry the network layer may consume.
  std::optional<double> relativeDistance(VehicleId a, VehicleId b) const;

  /// Alive peers within sensing range of `id`.
  std::vector<VehicleId> visibleFrom(VehicleId id) const;

  /// Audited ground-truth accessors. Reads are counted so tests can assert
  /// that no agent decision path consumes absolute state.
  const VehicleState& groundTruth(VehicleId id) const;
  Vec2 groundTruthPosition(VehicleId id) const;
  std::uint64_t groundTruthReads() const { return groundTruthReads_; }

  double trackPosOf(const VehicleState& v) const;

 private:
  const VehicleState& stateOf(VehicleId id) const;
  VehicleState& stateOf(VehicleId id);
  Vec2 positionOf(const VehicleState& v) const;
  double worldHeadingOf(const VehicleState& v) const;
  void stepVehicle(VehicleState& v, const Action& a);

  Track track_;
  DynamicsConfig dyn_;
  TerminationConfig term_;
  GridConfig grid_;
  std::vector<VehicleState> vehicles_;
  std::set<std::pair<VehicleId, VehicleId>> activeOverlaps_;
  std::set<VehicleId> activeOffTrack_;
  int step_{0};
  int episode_{-1};
  mutable std::uint64_t groundTruthReads_{0};
};

}  // namespace covanet
