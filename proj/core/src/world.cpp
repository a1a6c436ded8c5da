#include "covanet/world.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "covanet/rng.hpp"

namespace covanet {

namespace {
constexpr double kKmhToMs = 1.0 / 3.6;
constexpr double kIdleRpm = 600.0;
constexpr double kRpmPerKmh = 80.0;
constexpr double kWheelRadius = 0.33;  // m
// Frenet rate 1/(1 - kappa*dLat) blows up at the curvature center; clamp.
constexpr double kMinFrenetDenom = 0.2;
}  // namespace

World::World(Track track, DynamicsConfig dyn, TerminationConfig term,
             GridConfig grid)
    : track_(std::move(track)), dyn_(dyn), term_(term), grid_(grid) {
  if (dyn_.dt <= 0.0) throw ConfigError("dt must be positive");
  if (dyn_.footprintRadius <= 0.0) throw ConfigError("footprint radius must be positive");
}

VehicleId World::addVehicle(VehicleKind kind) {
  VehicleState v;
  v.id = static_cast<VehicleId>(vehicles_.size());
  v.kind = kind;
  vehicles_.push_back(v);
  return v.id;
}

const VehicleState& World::stateOf(VehicleId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= vehicles_.size()) {
    throw ContractViolation("unknown vehicle id " + std::to_string(id));
  }
  return vehicles_[static_cast<std::size_t>(id)];
}

VehicleState& World::stateOf(VehicleId id) {
  return const_cast<VehicleState&>(
      static_cast<const World*>(this)->stateOf(id));
}

bool World::isAlive(VehicleId id) const { return stateOf(id).alive; }

VehicleKind World::kindOf(VehicleId id) const { return stateOf(id).kind; }

std::vector<VehicleId> World::aliveIds() const {
  std::vector<VehicleId> out;
  for (const auto& v : vehicles_) {
    if (v.alive) out.push_back(v.id);
  }
  return out;
}

double World::trackPosOf(const VehicleState& v) const {
  return v.dLat / (track_.width() / 2.0);
}

Vec2 World::positionOf(const VehicleState& v) const {
  return track_.worldPoint(v.s, v.dLat);
}

double World::worldHeadingOf(const VehicleState& v) const {
  return wrapAngle(track_.heading(v.s) + v.psi);
}

void World::resetEpisode(std::uint64_t seed) {
  Rng rng = Rng(seed).fork(0x7265);
  const double halfWidth = track_.width() / 2.0;
  const double laneOffset = halfWidth * grid_.laneOffsetFrac;
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    VehicleState& v = vehicles_[i];
    const VehicleId id = v.id;
    const VehicleKind kind = v.kind;
    v = VehicleState{};
    v.id = id;
    v.kind = kind;
    const std::size_t slot = i / 2;
    v.s = grid_.startS + static_cast<double>(slot) * grid_.spacing;
    if (v.s >= track_.length()) {
      throw ConfigError("more vehicles than grid slots on this track");
    }
    v.dLat = (i % 2 == 0) ? laneOffset : -laneOffset;
    v.psi = 0.0;
    v.v = rng.uniform(grid_.speedMinKmh, grid_.speedMaxKmh);
    v.rpm = kIdleRpm + kRpmPerKmh * v.v;
    v.wheelSpinVel.fill(v.v * kKmhToMs / kWheelRadius);
    v.alive = true;
  }
  activeOverlaps_.clear();
  activeOffTrack_.clear();
  step_ = 0;
  ++episode_;
}

void World::teleport(VehicleId id, double s, double dLat, double psi,
                     double vKmh) {
  VehicleState& v = stateOf(id);
  v.s = track_.wrap(s);
  v.dLat = dLat;
  v.psi = wrapAngle(psi);
  v.v = vKmh;
  v.rpm = kIdleRpm + kRpmPerKmh * vKmh;
  v.wheelSpinVel.fill(vKmh * kKmhToMs / kWheelRadius);
}

void World::stepVehicle(VehicleState& v, const Action& a) {
  const double vMs = v.v * kKmhToMs;
  const double kappa = track_.curvature(v.s);

  // explicit Euler: positions advance with the current speed, then the
  // speed updates
  const double wheel = a.steering * dyn_.maxWheelAngle;
  const double yawRate = vMs * std::tan(wheel) / dyn_.wheelbase;
  double denom = 1.0 - kappa * v.dLat;
  if (std::abs(denom) < kMinFrenetDenom) {
    denom = denom < 0.0 ? -kMinFrenetDenom : kMinFrenetDenom;
  }
  const double sDot = vMs * std::cos(v.psi) / denom;
  const double dLatDot = vMs * std::sin(v.psi);
  const double psiDot = yawRate - kappa * sDot;

  double sNew = v.s + sDot * dyn_.dt;
  if (sNew >= track_.length()) {
    ++v.laps;
  } else if (sNew < 0.0) {
    --v.laps;
  }
  v.s = track_.wrap(sNew);
  v.dLat += dLatDot * dyn_.dt;
  v.psi = wrapAngle(v.psi + psiDot * dyn_.dt);

  const double accelMs2 =
      dyn_.accelGain * a.accel - dyn_.brakeGain * a.brake - dyn_.dragCoeff * vMs * vMs;
  const double vMsNew = std::max(0.0, vMs + accelMs2 * dyn_.dt);
  v.v = vMsNew / kKmhToMs;
  v.rpm = kIdleRpm + kRpmPerKmh * v.v;
  v.wheelSpinVel.fill(vMsNew / kWheelRadius);
  v.speedY = 0.0;
  v.speedZ = 0.0;

  const double trackPos = trackPosOf(v);
  v.reversalStreak = std::abs(v.psi) > kPi / 2.0 ? v.reversalStreak + 1 : 0;
  v.offTrackStreak = std::abs(trackPos) > 1.0 ? v.offTrackStreak + 1 : 0;
}

void World::step(const std::map<VehicleId, Action>& actions) {
  for (const auto& v : vehicles_) {
    if (!v.alive) continue;
    const auto it = actions.find(v.id);
    if (it == actions.end()) {
      throw ContractViolation("step: no action for alive vehicle " +
                              std::to_string(v.id));
    }
    if (!it->second.finite()) {
      throw ContractViolation("step: non-finite action from agent " +
                              std::to_string(v.id));
    }
  }
  for (auto& v : vehicles_) {
    if (!v.alive) continue;
    stepVehicle(v, actions.at(v.id));
  }
  ++step_;
}

SensorFrame World::sense(VehicleId id) const {
  const VehicleState& self = stateOf(id);
  if (!self.alive) {
    throw ContractViolation("sense: vehicle " + std::to_string(id) +
                            " is not alive");
  }
  SensorFrame f;
  f.angle = self.psi;
  f.trackPos = trackPosOf(self);
  f.v = self.v;
  f.speedY = self.speedY;
  f.speedZ = self.speedZ;
  f.rpm = self.rpm;
  f.wheelSpinVel = self.wheelSpinVel;

  f.opponents.fill(kSensorRangeM);
  const Vec2 selfPos = positionOf(self);
  const double selfHeading = worldHeadingOf(self);
  for (const auto& other : vehicles_) {
    if (!other.alive || other.id == id) continue;
    const Vec2 rel = positionOf(other) - selfPos;
    const double dist = rel.norm();
    if (dist > kSensorRangeM) continue;
    const double bearing = wrapAngle2Pi(std::atan2(rel.y, rel.x) - selfHeading);
    int sector = static_cast<int>(bearing / (kPi / 18.0));
    if (sector >= 36) sector = 35;
    f.opponents[static_cast<std::size_t>(sector)] =
        std::min(f.opponents[static_cast<std::size_t>(sector)], dist);
  }

  if (std::abs(f.trackPos) > 1.0) {
    f.track.fill(-1.0);
  } else {
    for (int k = 0; k < 19; ++k) {
      const double rayAngle = selfHeading - kPi / 2.0 + k * (kPi / 18.0);
      const auto hit = track_.castRay(selfPos, rayAngle, kSensorRangeM);
      f.track[static_cast<std::size_t>(k)] = hit ? *hit : kSensorRangeM;
    }
  }
  return f;
}

std::vector<CollisionEvent> World::checkCollisionRadius() {
  std::vector<CollisionEvent> events;
  const double threshold = 2.0 * dyn_.footprintRadius;

  std::set<std::pair<VehicleId, VehicleId>> overlaps;
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    if (!vehicles_[i].alive) continue;
    const Vec2 pi = positionOf(vehicles_[i]);
    for (std::size_t j = i + 1; j < vehicles_.size(); ++j) {
      if (!vehicles_[j].alive) continue;
      if ((positionOf(vehicles_[j]) - pi).norm() < threshold) {
        overlaps.insert({vehicles_[i].id, vehicles_[j].id});
      }
    }
  }
  for (const auto& pair : overlaps) {
    if (!activeOverlaps_.contains(pair)) {
      events.push_back({pair.first, pair.second, step_, episode_});
    }
  }
  activeOverlaps_ = std::move(overlaps);

  std::set<VehicleId> offTrack;
  for (const auto& v : vehicles_) {
    if (!v.alive) continue;
    if (std::abs(trackPosOf(v)) > 1.0) offTrack.insert(v.id);
  }
  for (VehicleId id : offTrack) {
    if (!activeOffTrack_.contains(id)) {
      events.push_back({id, CollisionEvent::kOffTrack, step_, episode_});
    }
  }
  activeOffTrack_ = std::move(offTrack);
  return events;
}

std::vector<VehicleVerdict> World::verdicts(int t) const {
  std::vector<VehicleVerdict> out;
  for (const auto& v : vehicles_) {
    if (!v.alive) continue;
    TerminationReason reason = TerminationReason::None;
    if (v.laps >= 1) {
      reason = TerminationReason::Arrival;
    } else if (v.reversalStreak >= term_.reversalSteps) {
      reason = TerminationReason::Reversal;
    } else if (v.offTrackStreak > term_.offTrackGrace) {
      reason = TerminationReason::OffTrack;
    } else if (t >= term_.maxSteps) {
      reason = TerminationReason::Time;
    }
    out.push_back({v.id, reason});
  }
  return out;
}

void World::despawn(VehicleId id) {
  VehicleState& v = stateOf(id);
  v.alive = false;
}

std::optional<double> World::relativeDistance(VehicleId a, VehicleId b) const {
  const VehicleState& va = stateOf(a);
  const VehicleState& vb = stateOf(b);
  if (!va.alive || !vb.alive || a == b) return std::nullopt;
  const double d = (positionOf(va) - positionOf(vb)).norm();
  if (d > kSensorRangeM) return std::nullopt;
  return d;
}

std::vector<VehicleId> World::visibleFrom(VehicleId id) const {
  std::vector<VehicleId> out;
  for (const auto& other : vehicles_) {
    if (other.id == id || !other.alive) continue;
    if (relativeDistance(id, other.id)) out.push_back(other.id);
  }
  return out;
}

const VehicleState& World::groundTruth(VehicleId id) const {
  ++groundTruthReads_;
  return stateOf(id);
}

Vec2 World::groundTruthPosition(VehicleId id) const {
  ++groundTruthReads_;
  return positionOf(stateOf(id));
}

}  // namespace covanet
