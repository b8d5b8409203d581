#ifndef VLNCE_GEOMETRY_HPP
#define VLNCE_GEOMETRY_HPP

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace vlnce {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
};

using Polyline = std::vector<Point2>;

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Wraps any integer angle into [0, 360).
constexpr int wrap_degrees(int deg) {
  const int r = deg % 360;
  return r < 0 ? r + 360 : r;
}

/// Wraps a real angle into (-180, 180].
inline double normalize_signed_degrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r <= -180.0) r += 360.0;
  if (r > 180.0) r -= 360.0;
  return r;
}

inline double to_radians(double deg) { return deg * std::numbers::pi / 180.0; }
inline double to_degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Unit vector for a heading in degrees, 0 = +x, counter-clockwise positive.
/// Quarter turns are exact so axis-aligned motion carries no trig residue.
inline Point2 heading_vector(double deg) {
  const double w = std::fmod(std::fmod(deg, 360.0) + 360.0, 360.0);
  if (w == 0.0) return {1.0, 0.0};
  if (w == 90.0) return {0.0, 1.0};
  if (w == 180.0) return {-1.0, 0.0};
  if (w == 270.0) return {0.0, -1.0};
  const double rad = to_radians(w);
  return {std::cos(rad), std::sin(rad)};
}

/// Bearing from `from` to `to` in degrees, (-180, 180].
inline double bearing_degrees(Point2 from, Point2 to) {
  return to_degrees(std::atan2(to.y - from.y, to.x - from.x));
}

struct Pose {
  double x = 0.0;
  double y = 0.0;
  int heading = 0;  // degrees in [0, 360)

  Point2 position() const { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

inline double polyline_length(std::span<const Point2> pts) {
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) total += distance(pts[i - 1], pts[i]);
  return total;
}

/// Resamples a polyline at fixed arc-length spacing. Keeps the first and last vertex.
inline Polyline resample_polyline(std::span<const Point2> pts, double spacing) {
  Polyline out;
  if (pts.empty()) return out;
  out.push_back(pts.front());
  double carry = 0.0;  // arc length already travelled since the last emitted point
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Point2 a = pts[i - 1];
    const Point2 b = pts[i];
    const double seg = distance(a, b);
    if (seg == 0.0) continue;
    double t = spacing - carry;
    while (t < seg - 1e-9) {
      out.push_back(a + (t / seg) * (b - a));
      t += spacing;
    }
    carry = seg - (t - spacing);
  }
  if (!(out.back() == pts.back())) out.push_back(pts.back());
  return out;
}

}  // namespace vlnce

#endif  // VLNCE_GEOMETRY_HPP
