#include "covanet/reward.hpp"

#include <cmath>

namespace covanet {

void RewardConfig::validate() const {
  auto inUnit = [](double w) { return w >= 0.0 && w <= 1.0; };
  if (!inUnit(wCollision) || !inUnit(wTime) || !inUnit(wOnRoad)) {
    throw ConfigError("reward weights must lie in [0, 1]");
  }
  if (std::abs(wCollision + wTime + wOnRoad - 1.0) > 1e-9) {
    throw ConfigError("reward weights must sum to 1");
  }
  if (!(aCur > 0.0) || !(aCur <= aMax)) {
    throw ConfigError("deceleration must satisfy 0 < aCur <= aMax");
  }
  if (tSense < 0.0) throw ConfigError("sensing delay must be nonnegative");
  if (std::abs(speedSqDiv - 2.0 * speedDiv * speedDiv) > 1e-9) {
    throw ConfigError("speed unit constants are inconsistent");
  }
}

double safeDistance(double vKmh, const RewardConfig& cfg) {
  if (cfg.aCur == 0.0) {
    throw ConfigError("safeDistance: current deceleration is zero");
  }
  const double v2 = vKmh * vKmh;
  return cfg.tSense * vKmh / cfg.speedDiv +
         v2 / (cfg.speedSqDiv * std::abs(cfg.aCur)) -
         v2 / (cfg.speedSqDiv * std::abs(cfg.aMax));
}

double collisionTerm(double d, double dMin, const RewardConfig& cfg) {
  if (d <= dMin) return -(dMin - d) * cfg.wPenalty;
  return 0.0;
}

double timeTerm(bool arrived, double vKmh, double beta,
                const RewardConfig& cfg) {
  if (arrived) return 10.0 * cfg.wPenalty;
  return cfg.wPenalty * std::abs(vKmh * std::sin(beta));
}

double onRoadTerm(double vKmh, double beta, double trackPos,
                  const RewardConfig& cfg) {
  return cfg.oSignTrackPos * vKmh * std::abs(trackPos) +
         cfg.oSignTransverse * std::abs(vKmh * std::sin(beta)) +
         cfg.oSignLongitudinal * vKmh * std::cos(beta);
}

RewardBreakdown totalReward(double collision, double time, double onRoad,
                            const RewardConfig& cfg) {
  RewardBreakdown b;
  b.collision = collision;
  b.time = time;
  b.onRoad = onRoad;
  b.total = cfg.wCollision * collision + cfg.wTime * time + cfg.wOnRoad * onRoad;
  return b;
}

RewardBreakdown perStepReward(double vKmh, double beta, double trackPos,
                              double minOpponentDist, bool arrived,
                              const RewardConfig& cfg) {
  const double dMin = safeDistance(vKmh, cfg);
  return totalReward(collisionTerm(minOpponentDist, dMin, cfg),
                     timeTerm(arrived, vKmh, beta, cfg),
                     onRoadTerm(vKmh, beta, trackPos, cfg), cfg);
}

}  // namespace covanet
