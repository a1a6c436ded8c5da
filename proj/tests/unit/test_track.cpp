#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "covanet/rng.hpp"
#include "covanet/track.hpp"

using namespace covanet;

TEST_CASE("construction validates geometry") {
  CHECK_THROWS_AS(Track({{100.0, 0.0}}, 10.0), ConfigError);  // open polyline
  CHECK_THROWS_AS(Track::circle(10.0, 10.0), ConfigError);    // radius < width/2
  CHECK_THROWS_AS(Track({}, 10.0), ConfigError);
  CHECK_THROWS_AS(Track::circle(-5.0, 10.0), ConfigError);
  CHECK_NOTHROW(Track::circle(3186.0, 15.0));
  CHECK_NOTHROW(Track::stadiumWithLength(800.0, 150.0, 12.0));
  CHECK_THROWS_AS(Track::stadiumWithLength(200.0, 150.0, 12.0), ConfigError);
}

TEST_CASE("closure and arclength parameterization") {
  const Track track = Track::stadiumWithLength(800.0, 150.0, 12.0);
  CHECK(track.length() == doctest::Approx(800.0));

  // closed curve: endpoints meet
  const Vec2 p0 = track.position(0.0);
  const Vec2 pL = track.position(track.length() - 1e-12);
  CHECK((pL - p0).norm() < 1e-6);

  // |dp/ds| == 1 by central differences, sampled everywhere incl. joins
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const double s = rng.uniform(0.0, track.length());
    const double h = 1e-5;
    const Vec2 grad = (track.position(s + h) - track.position(s - h)) * (1.0 / (2.0 * h));
    CHECK(grad.norm() == doctest::Approx(1.0).epsilon(1e-6));
    // tangent matches heading
    const Vec2 t = headingVec(track.heading(s));
    CHECK(grad.dot(t) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("tangent continuity at segment joins") {
  const Track track = Track::stadiumWithLength(800.0, 150.0, 12.0);
  const double joins[] = {150.0, 150.0 + 250.0 * kPi / 2.0};
  for (double s : joins) {
    const double before = track.heading(s - 1e-9);
    const double after = track.heading(s + 1e-9);
    CHECK(std::abs(wrapAngle(after - before)) < 1e-6);
  }
}

TEST_CASE("world point offsets along the left normal") {
  const Track track = Track::circle(628.3185307179587, 10.0);  // r = 100
  // at s = 0 the tangent points +x, so left is +y and the center sits left
  const Vec2 inner = track.worldPoint(0.0, 2.0);
  const Vec2 outer = track.worldPoint(0.0, -2.0);
  CHECK(inner.y == doctest::Approx(2.0));
  CHECK(outer.y == doctest::Approx(-2.0));
  CHECK(inner.x == doctest::Approx(0.0));
}

TEST_CASE("ray casting against the edges") {
  const Track track = Track::stadiumWithLength(1000.0, 300.0, 15.0);

  SUBCASE("perpendicular rays from the centerline read the half width") {
    const Vec2 origin = track.worldPoint(10.0, 0.0);  // on a straight
    const double heading = track.heading(10.0);
    const auto left = track.castRay(origin, heading + kPi / 2.0, 200.0);
    const auto right = track.castRay(origin, heading - kPi / 2.0, 200.0);
    REQUIRE(left.has_value());
    REQUIRE(right.has_value());
    CHECK(*left == doctest::Approx(7.5));
    CHECK(*right == doctest::Approx(7.5));
  }

  SUBCASE("offset origin shifts the two readings oppositely") {
    const Vec2 origin = track.worldPoint(20.0, 3.0);
    const double heading = track.heading(20.0);
    CHECK(*track.castRay(origin, heading + kPi / 2.0, 200.0) ==
          doctest::Approx(4.5));
    CHECK(*track.castRay(origin, heading - kPi / 2.0, 200.0) ==
          doctest::Approx(10.5));
  }

  SUBCASE("rays from inside always hit something within the cap") {
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
      const double s = rng.uniform(0.0, track.length());
      const double dLat = rng.uniform(-7.0, 7.0);
      const double dir = rng.uniform(0.0, 2.0 * kPi);
      const auto hit = track.castRay(track.worldPoint(s, dLat), dir, 1e6);
      REQUIRE(hit.has_value());
      CHECK(*hit > 0.0);
    }
  }
}

TEST_CASE("wrapping") {
  const Track track = Track::circle(100.0, 8.0);
  CHECK(track.wrap(105.0) == doctest::Approx(5.0));
  CHECK(track.wrap(-3.0) == doctest::Approx(97.0));
  CHECK(track.wrap(0.0) == 0.0);
}
