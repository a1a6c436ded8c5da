#pragma once

#include <optional>
#include <vector>

#include "covanet/common.hpp"
#include "covanet/geometry.hpp"

namespace covanet {

/// One piece of a closed centerline: a straight (curvature 0) or a circular
/// arc (curvature = +-1/radius, positive turning left).
struct SegmentSpec {
  double length{0.0};
  double curvature{0.0};
};

/// Closed track centerline parameterized by arclength, with a constant width.
/// The centerline must close on itself (position and tangent) or construction
/// throws ConfigError.
class Track {
 public:
  Track(std::vector<SegmentSpec> segments, double width);

  /// Circle of the given total length.
  static Track circle(double length, double width);

  /// Two straights joined by two semicircles. Total length is
  /// 2*straight + 2*pi*radius.
  static Track stadium(double straightLength, double radius, double width);

  /// Stadium with straights of the given length, radius chosen so the total
  /// centerline length comes out exactly as requested.
  static Track stadiumWithLength(double totalLength, double straightLength,
                                 double width);

  double length() const { return length_; }
  double width() const { return width_; }

  /// Wrap an arclength coordinate into [0, length).
  double wrap(double s) const;

  Vec2 position(double s) const;
  double heading(double s) const;
  double curvature(double s) const;

  /// World-space point at arclength s and signed lateral offset (left > 0).
  Vec2 worldPoint(double s, double dLat) const;

  /// Distance from `origin` along `direction` (world angle, radians) to the
  /// nearest track edge, or nullopt if nothing is hit within maxRange.
  std::optional<double> castRay(Vec2 origin, double direction,
                                double maxRange) const;

 private:
  struct Segment {
    double s0;        // cumulative arclength at segment start
    double length;
    double curvature;
    Vec2 p0;          // centerline position at start
    double heading0;  // tangent angle at start
  };

  struct EdgeLine {
    Vec2 a;
    Vec2 b;
  };

  struct EdgeArc {
    Vec2 center;
    double radius;
    double startAngle;  // angle of the arc start, from center
    double sweep;       // signed; positive counterclockwise
  };

  const Segment& segmentAt(double s) const;
  void buildEdges();

  std::vector<Segment> segments_;
  std::vector<EdgeLine> edgeLines_;
  std::vector<EdgeArc> edgeArcs_;
  double width_{0.0};
  double length_{0.0};
};

}  // namespace covanet
