#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "covanet/reward.hpp"
#include "covanet/rng.hpp"
#include "support/oracles.hpp"

using namespace covanet;

namespace {
RewardConfig defaults() { return RewardConfig{}; }
}  // namespace

TEST_CASE("config validation") {
  RewardConfig cfg = defaults();
  CHECK_NOTHROW(cfg.validate());

  cfg.wCollision = 0.5;  // weights no longer sum to 1
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = defaults();
  cfg.aCur = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = defaults();
  cfg.aCur = 7.0;  // above aMax
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = defaults();
  cfg.speedSqDiv = 20.0;  // breaks 2*A^2 consistency
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("safe distance") {
  const RewardConfig cfg = defaults();

  CHECK(safeDistance(0.0, cfg) == 0.0);

  SUBCASE("braking terms cancel when aCur equals aMax") {
    RewardConfig c = cfg;
    c.aCur = c.aMax = 6.0;
    CHECK(safeDistance(54.0, c) ==
          doctest::Approx(c.tSense * 54.0 / 3.6).epsilon(1e-12));
  }

  SUBCASE("worked example at 54 km/h") {
    // 15 m/s: reaction 7.5, gap 37.5 - 18.75
    CHECK(safeDistance(54.0, cfg) == doctest::Approx(26.25).epsilon(1e-12));
  }

  SUBCASE("zero deceleration is a configuration fault") {
    RewardConfig c = cfg;
    c.aCur = 0.0;
    CHECK_THROWS_AS(safeDistance(10.0, c), ConfigError);
  }

  SUBCASE("agrees with the SI oracle across random draws") {
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
      RewardConfig c = cfg;
      c.tSense = rng.uniform(0.0, 2.0);
      c.aCur = rng.uniform(0.5, 6.0);
      c.aMax = c.aCur + rng.uniform(0.0, 4.0);
      const double v = rng.uniform(0.0, 150.0);
      const double expected =
          oracles::safeDistanceSiOracle(v, c.tSense, c.aCur, c.aMax);
      CHECK(safeDistance(v, c) ==
            doctest::Approx(expected).epsilon(1e-9));
    }
  }

  SUBCASE("nondecreasing in speed") {
    double prev = 0.0;
    for (double v = 0.0; v <= 120.0; v += 1.0) {
      const double d = safeDistance(v, cfg);
      CHECK(d >= prev);
      prev = d;
    }
  }
}

TEST_CASE("collision term") {
  const RewardConfig cfg = defaults();
  CHECK(collisionTerm(30.0, 26.25, cfg) == 0.0);
  CHECK(collisionTerm(26.25, 26.25, cfg) == 0.0);  // boundary
  CHECK(collisionTerm(20.0, 26.25, cfg) == doctest::Approx(-6250.0));

  SUBCASE("continuous at the boundary and monotone in distance") {
    const double dMin = 26.25;
    CHECK(collisionTerm(dMin - 1e-9, dMin, cfg) ==
          doctest::Approx(0.0).epsilon(1e-3));
    double prev = collisionTerm(0.0, dMin, cfg);
    for (double d = 0.5; d < 40.0; d += 0.5) {
      const double c = collisionTerm(d, dMin, cfg);
      CHECK(c >= prev);
      CHECK(c <= 0.0);
      prev = c;
    }
  }
}

TEST_CASE("time term") {
  const RewardConfig cfg = defaults();
  CHECK(timeTerm(true, 0.0, 0.0, cfg) == doctest::Approx(10000.0));
  CHECK(timeTerm(false, 50.0, 0.0, cfg) == 0.0);
  CHECK(timeTerm(false, 50.0, kPi / 6.0, cfg) == doctest::Approx(25000.0));
  // arrival dominates whatever the motion is
  CHECK(timeTerm(true, 50.0, kPi / 6.0, cfg) == doctest::Approx(10000.0));
}

TEST_CASE("on-road term") {
  const RewardConfig cfg = defaults();
  CHECK(onRoadTerm(0.0, 0.3, 0.7, cfg) == 0.0);
  CHECK(onRoadTerm(50.0, 0.0, 0.0, cfg) == doctest::Approx(-50.0));
  CHECK(onRoadTerm(50.0, kPi / 2.0, -1.0, cfg) ==
        doctest::Approx(100.0).epsilon(1e-9));

  SUBCASE("sign multipliers flip individual pieces") {
    RewardConfig c = cfg;
    c.oSignLongitudinal = 1.0;
    CHECK(onRoadTerm(50.0, 0.0, 0.0, c) == doctest::Approx(50.0));
  }
}

TEST_CASE("total reward") {
  const RewardConfig cfg = defaults();
  CHECK(totalReward(0.0, 0.0, 0.0, cfg).total == 0.0);
  CHECK(totalReward(-6250.0, 0.0, -50.0, cfg).total ==
        doctest::Approx(-3760.0));
  CHECK(totalReward(0.0, 10000.0, 0.0, cfg).total == doctest::Approx(2000.0));

  SUBCASE("breakdown recombines exactly") {
    const RewardBreakdown b = totalReward(-1.5, 2.25, -0.125, cfg);
    CHECK(b.total == cfg.wCollision * b.collision + cfg.wTime * b.time +
                         cfg.wOnRoad * b.onRoad);
  }

  SUBCASE("linear in a common scale") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
      const double c = rng.uniform(-100.0, 100.0);
      const double h = rng.uniform(-100.0, 100.0);
      const double o = rng.uniform(-100.0, 100.0);
      const double lambda = rng.uniform(0.1, 10.0);
      const double r = totalReward(c, h, o, cfg).total;
      const double rScaled =
          totalReward(lambda * c, lambda * h, lambda * o, cfg).total;
      CHECK(rScaled == doctest::Approx(lambda * r).epsilon(1e-9));
    }
  }
}

TEST_CASE("per-step composition") {
  const RewardConfig cfg = defaults();

  SUBCASE("lone on-track vehicle gets no collision penalty") {
    for (double v = 0.0; v <= 60.0; v += 5.0) {
      CHECK(safeDistance(v, cfg) < 200.0);
      const RewardBreakdown b = perStepReward(v, 0.1, 0.2, 200.0, false, cfg);
      CHECK(b.collision == 0.0);
    }
  }

  SUBCASE("overlapping pair is penalized") {
    const RewardBreakdown b = perStepReward(50.0, 0.0, 0.0, 3.0, false, cfg);
    CHECK(b.collision < 0.0);
  }

  SUBCASE("arrival bonus shows up regardless of neighbors") {
    const RewardBreakdown b = perStepReward(50.0, 0.0, 0.0, 3.0, true, cfg);
    CHECK(b.time == doctest::Approx(10.0 * cfg.wPenalty));
  }
}
