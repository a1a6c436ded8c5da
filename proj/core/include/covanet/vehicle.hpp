#pragma once

#include <array>
#include <cmath>

#include "covanet/common.hpp"

namespace covanet {

/// Full steering command maps to this physical wheel angle, radians.
inline constexpr double kMaxWheelAngleRad = 0.366519;

/// Continuous control triple. accel/brake in [0,1], steering in [-1,1]
/// (+1 steers fully left).
struct Action {
  double accel{0.0};
  double brake{0.0};
  double steering{0.0};

  bool finite() const {
    return std::isfinite(accel) && std::isfinite(brake) &&
           std::isfinite(steering);
  }
};

/// Ground-truth pose of one vehicle in track (Frenet) coordinates. Never
/// crosses the network interface; peers see only relative distances.
struct VehicleState {
  VehicleId id{0};
  VehicleKind kind{VehicleKind::Ndv};
  double s{0.0};       // arclength along the centerline, wrapped, m
  double dLat{0.0};    // signed lateral offset, left positive, m
  double psi{0.0};     // heading relative to the track tangent, (-pi, pi]
  double v{0.0};       // longitudinal speed, km/h
  double speedY{0.0};  // km/h; zero under the no-slip kinematic model
  double speedZ{0.0};  // km/h; planar world
  double rpm{600.0};
  std::array<double, 4> wheelSpinVel{};  // rad/s
  int laps{0};
  bool alive{true};

  // per-episode termination counters, maintained by World::step
  int reversalStreak{0};
  int offTrackStreak{0};
};

}  // namespace covanet
