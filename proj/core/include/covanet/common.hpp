#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace covanet {

using VehicleId = std::int32_t;

enum class VehicleKind { Adv, Ndv };

inline constexpr double kPi = std::numbers::pi;

/// Range-finder cap shared by opponent and track sensors, meters.
inline constexpr double kSensorRangeM = 200.0;

/// Caller broke an API precondition; a bug, not a user error.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite loss or gradient; training must halt.
class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wrap to (-pi, pi].
inline double wrapAngle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) {
    a += 2.0 * kPi;
  } else if (a > kPi) {
    a -= 2.0 * kPi;
  }
  return a;
}

/// Wrap to [0, 2*pi).
inline double wrapAngle2Pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  if (a >= 2.0 * kPi) a = 0.0;
  return a;
}

template <typename T>
T clamp(T v, T lo, T hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

/// Sink for non-fatal diagnostics (discarded packets, ignored no-ops, ...).
using DiagnosticSink = std::function<void(std::string_view)>;

DiagnosticSink stderrDiagnostics();

}  // namespace covanet
