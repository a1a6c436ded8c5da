#include "covanet/track.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace covanet {

namespace {
constexpr double kClosureTolM = 1e-6;
constexpr double kClosureTolRad = 1e-9;
constexpr double kRayEps = 1e-9;
}  // namespace

DiagnosticSink stderrDiagnostics() {
  return [](std::string_view msg) { std::cerr << msg << "\n"; };
}

Track::Track(std::vector<SegmentSpec> specs, double width) : width_(width) {
  if (width <= 0.0) throw ConfigError("track width must be positive");
  if (specs.empty()) throw ConfigError("track needs at least one segment");

  Vec2 p{0.0, 0.0};
  double h = 0.0;
  double s = 0.0;
  segments_.reserve(specs.size());
  for (const auto& spec : specs) {
    if (spec.length <= 0.0) throw ConfigError("segment length must be positive");
    if (spec.curvature != 0.0 &&
        std::abs(1.0 / spec.curvature) <= width / 2.0) {
      throw ConfigError("arc radius must exceed half the track width");
    }
    segments_.push_back({s, spec.length, spec.curvature, p, h});
    if (spec.curvature == 0.0) {
      p = p + headingVec(h) * spec.length;
    } else {
      const Vec2 center = p + leftNormal(headingVec(h)) * (1.0 / spec.curvature);
      const double sweep = spec.curvature * spec.length;
      p = center + rotate(p - center, sweep);
      h = h + sweep;
    }
    s += spec.length;
  }
  length_ = s;

  if ((p - Vec2{0.0, 0.0}).norm() > kClosureTolM) {
    throw ConfigError("track centerline does not close on itself");
  }
  if (std::abs(wrapAngle(h)) > kClosureTolRad) {
    throw ConfigError("track tangent is discontinuous at the closure point");
  }
  buildEdges();
}

Track Track::circle(double length, double width) {
  if (length <= 0.0) throw ConfigError("track length must be positive");
  const double radius = length / (2.0 * kPi);
  return Track({{length, 1.0 / radius}}, width);
}

Track Track::stadium(double straightLength, double radius, double width) {
  if (straightLength <= 0.0 || radius <= 0.0) {
    throw ConfigError("stadium straights and radius must be positive");
  }
  const double arc = kPi * radius;
  const double k = 1.0 / radius;
  return Track({{straightLength, 0.0},
                {arc, k},
                {straightLength, 0.0},
                {arc, k}},
               width);
}

Track Track::stadiumWithLength(double totalLength, double straightLength,
                               double width) {
  const double arcTotal = totalLength - 2.0 * straightLength;
  if (arcTotal <= 0.0) {
    throw ConfigError("stadium straights leave no room for the curves");
  }
  return stadium(straightLength, arcTotal / (2.0 * kPi), width);
}

double Track::wrap(double s) const {
  s = std::fmod(s, length_);
  if (s < 0.0) s += length_;
  return s;
}

const Track::Segment& Track::segmentAt(double s) const {
  // few segments; linear scan
  for (std::size_t i = segments_.size(); i-- > 0;) {
    if (s >= segments_[i].s0) return segments_[i];
  }
  return segments_.front();
}

Vec2 Track::position(double s) const {
  s = wrap(s);
  const Segment& seg = segmentAt(s);
  const double u = s - seg.s0;
  if (seg.curvature == 0.0) {
    return seg.p0 + headingVec(seg.heading0) * u;
  }
  const Vec2 center =
      seg.p0 + leftNormal(headingVec(seg.heading0)) * (1.0 / seg.curvature);
  return center + rotate(seg.p0 - center, seg.curvature * u);
}

double Track::heading(double s) const {
  s = wrap(s);
  const Segment& seg = segmentAt(s);
  return wrapAngle(seg.heading0 + seg.curvature * (s - seg.s0));
}

double Track::curvature(double s) const { return segmentAt(wrap(s)).curvature; }

Vec2 Track::worldPoint(double s, double dLat) const {
  return position(s) + leftNormal(headingVec(heading(s))) * dLat;
}

void Track::buildEdges() {
  const double half = width_ / 2.0;
  for (const Segment& seg : segments_) {
    const Vec2 t = headingVec(seg.heading0);
    const Vec2 n = leftNormal(t);
    if (seg.curvature == 0.0) {
      for (double side : {half, -half}) {
        const Vec2 a = seg.p0 + n * side;
        edgeLines_.push_back({a, a + t * seg.length});
      }
    } else {
      const double r = 1.0 / seg.curvature;
      const Vec2 center = seg.p0 + n * r;
      const double sweep = seg.curvature * seg.length;
      const Vec2 toStart = seg.p0 - center;
      const double startAngle = std::atan2(toStart.y, toStart.x);
      for (double side : {half, -half}) {
        // offset edge lies at |r - side| from the same center
        edgeArcs_.push_back(
            {center, std::abs(r - side), startAngle, sweep});
      }
    }
  }
}

std::optional<double> Track::castRay(Vec2 origin, double direction,
                                     double maxRange) const {
  const Vec2 d = headingVec(direction);
  double best = maxRange;
  bool hit = false;

  for (const EdgeLine& line : edgeLines_) {
    const Vec2 e = line.b - line.a;
    const double denom = d.cross(e);
    if (std::abs(denom) < 1e-15) continue;  // parallel
    const Vec2 w = line.a - origin;
    const double t = w.cross(e) / denom;
    const double u = w.cross(d) / denom;
    if (t > kRayEps && u >= 0.0 && u <= 1.0 && t < best) {
      best = t;
      hit = true;
    }
  }

  for (const EdgeArc& arc : edgeArcs_) {
    const Vec2 oc = origin - arc.center;
    const double b = oc.dot(d);
    const double c = oc.norm2() - arc.radius * arc.radius;
    const double disc = b * b - c;
    if (disc < 0.0) continue;
    const double sq = std::sqrt(disc);
    for (double t : {-b - sq, -b + sq}) {
      if (t <= kRayEps || t >= best) continue;
      const Vec2 p = origin + d * t;
      const Vec2 cp = p - arc.center;
      const double ang = std::atan2(cp.y, cp.x);
      const double delta = arc.sweep >= 0.0 ? wrapAngle2Pi(ang - arc.startAngle)
                                            : wrapAngle2Pi(arc.startAngle - ang);
      if (delta <= std::abs(arc.sweep)) {
        best = t;
        hit = true;
      }
    }
  }

  if (!hit) return std::nullopt;
  return best;
}

}  // namespace covanet
