#pragma once

#include "covanet/common.hpp"

namespace covanet {

/// Weights and braking constants of the per-step reward. The on-road term is
/// a signed sum of three pieces; the sign multipliers default to the shipped
/// formula and can be flipped in configuration without code changes.
struct RewardConfig {
  double wCollision{0.6};
  double wTime{0.2};
  double wOnRoad{0.2};
  double wPenalty{1000.0};   // penalty/reward value per meter of violation
  double tSense{0.5};        // emergency-detection delay, s
  double aCur{3.0};          // current deceleration magnitude, m/s^2
  double aMax{6.0};          // maximum deceleration magnitude, m/s^2
  double speedDiv{3.6};      // km/h -> m/s
  double speedSqDiv{25.92};  // (km/h)^2 -> braking-gap scale; 2*speedDiv^2

  double oSignTrackPos{1.0};
  double oSignTransverse{1.0};
  double oSignLongitudinal{-1.0};

  /// Throws ConfigError when weights or braking constants are inconsistent.
  void validate() const;
};

struct RewardBreakdown {
  double collision{0.0};
  double time{0.0};
  double onRoad{0.0};
  double total{0.0};
};

/// Speed-dependent separation below which the collision term kicks in, m.
/// v is in km/h. Throws ConfigError when aCur is zero.
double safeDistance(double vKmh, const RewardConfig& cfg);

/// Nonpositive; linear in the violation depth below dMin, zero at or beyond.
double collisionTerm(double d, double dMin, const RewardConfig& cfg);

/// Arrival bonus, otherwise the transverse-speed magnitude scaled by the
/// penalty value. beta is the heading-vs-track angle, radians.
double timeTerm(bool arrived, double vKmh, double beta, const RewardConfig& cfg);

/// Signed combination of |trackPos|, transverse and longitudinal speed.
double onRoadTerm(double vKmh, double beta, double trackPos,
                  const RewardConfig& cfg);

RewardBreakdown totalReward(double collision, double time, double onRoad,
                            const RewardConfig& cfg);

/// Composition over one observation: d is the nearest-opponent reading,
/// beta the frame angle.
RewardBreakdown perStepReward(double vKmh, double beta, double trackPos,
                              double minOpponentDist, bool arrived,
                              const RewardConfig& cfg);

}  // namespace covanet
