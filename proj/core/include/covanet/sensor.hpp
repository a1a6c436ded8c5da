#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "covanet/common.hpp"

namespace covanet {

/// One observation, mirroring the classic racing-sim sensor set.
///  - opponents[k] is the nearest vehicle in the 10-degree bearing sector
///    [k*10, (k+1)*10) degrees counterclockwise from the vehicle's forward
///    axis; 36 sectors tile the full circle. 200 means nothing sensed.
///  - track[i] is the range to the track edge along the ray at
///    (-90 + 10*i) degrees from the vehicle axis; -1 on all rays when the
///    vehicle is off the track.
struct SensorFrame {
  double angle{0.0};  // heading relative to track axis, (-pi, pi]
  std::array<double, 36> opponents{};
  std::array<double, 19> track{};
  double trackPos{0.0};  // lateral offset / half width; |.| > 1 is off-track
  double v{0.0};         // km/h
  double speedY{0.0};
  double speedZ{0.0};
  double rpm{0.0};
  std::array<double, 4> wheelSpinVel{};

  static constexpr int kFlatDim = 1 + 36 + 19 + 1 + 3 + 1 + 4;  // 65

  double minOpponent() const {
    return *std::min_element(opponents.begin(), opponents.end());
  }
};

/// Flatten to the learner's input layout with fixed per-channel scaling:
/// angle/pi, opponents/200, track/200 (off-track sentinel -1 kept as -1),
/// trackPos raw, speeds/100, rpm/1e4, wheel spins/100. Scaling is part of
/// the state encoding; the learner treats the channels as opaque.
template <typename S>
std::vector<S> flattenFrame(const SensorFrame& f) {
  std::vector<S> out;
  out.reserve(SensorFrame::kFlatDim);
  out.push_back(static_cast<S>(f.angle / kPi));
  for (double o : f.opponents) out.push_back(static_cast<S>(o / kSensorRangeM));
  for (double t : f.track) {
    out.push_back(static_cast<S>(t < 0.0 ? -1.0 : t / kSensorRangeM));
  }
  out.push_back(static_cast<S>(f.trackPos));
  out.push_back(static_cast<S>(f.v / 100.0));
  out.push_back(static_cast<S>(f.speedY / 100.0));
  out.push_back(static_cast<S>(f.speedZ / 100.0));
  out.push_back(static_cast<S>(f.rpm / 10000.0));
  for (double w : f.wheelSpinVel) out.push_back(static_cast<S>(w / 100.0));
  return out;
}

}  // namespace covanet
