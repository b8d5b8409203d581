#ifndef VLNCE_SVG_HPP
#define VLNCE_SVG_HPP

#include <algorithm>
#include <cstdio>
#include <string>

#include "vlnce/geometry.hpp"
#include "vlnce/scenegen.hpp"
#include "vlnce/trajectory.hpp"
#include "vlnce/world.hpp"

namespace vlnce {

namespace detail {
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}
}  // namespace detail

/// Executed vs reference trajectory over the grid. Red crosses mark collisions, orange rings
/// mark tryout forwards that got the agent moving again.
inline std::string plot_trajectory_svg(const OccupancyGrid& grid, const Episode& episode, const TrajectoryLog& log) {
  using detail::fmt;
  const double px = std::max(4.0, 800.0 / std::max(grid.width(), grid.height()));
  const double scale = px / grid.resolution();
  const auto X = [&](double x) { return fmt(x * scale); };
  const auto Y = [&](double y) { return fmt(y * scale); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(grid.width() * px) + "\" height=\"" +
       fmt(grid.height() * px) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g fill=\"#444\">\n";
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width();) {
      if (!grid.blocked({x, y})) {
        ++x;
        continue;
      }
      int run = 1;
      while (x + run < grid.width() && grid.blocked({x + run, y})) ++run;
      s += "<rect x=\"" + fmt(x * px) + "\" y=\"" + fmt(y * px) + "\" width=\"" + fmt(run * px) + "\" height=\"" +
           fmt(px) + "\"/>\n";
      x += run;
    }
  }
  s += "</g>\n";

  const auto polyline = [&](const Polyline& pts, const char* color, double width) {
    std::string out = "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"" + fmt(width) +
                      "\" points=\"";
    for (const auto& p : pts) out += X(p.x) + ',' + Y(p.y) + ' ';
    out += "\"/>\n";
    return out;
  };
  s += polyline(episode.reference_path, "#2a9d2a", 3.0);
  s += polyline(log.positions(), "#1f5fbf", 1.5);

  const double r = std::max(2.0, px / 2);
  Point2 prev = log.start.position();
  for (const auto& st : log.steps) {
    const Point2 p = st.pose.position();
    if (st.collided) {
      s += "<path stroke=\"#d62728\" stroke-width=\"1.5\" d=\"M" + fmt(p.x * scale - r) + ',' + fmt(p.y * scale - r) +
           " l" + fmt(2 * r) + ',' + fmt(2 * r) + " m0," + fmt(-2 * r) + " l" + fmt(-2 * r) + ',' + fmt(2 * r) +
           "\"/>\n";
    }
    if (st.kind == ChargeKind::Tried && st.action == LowLevelAction::Forward && !(p == prev)) {
      s += "<circle fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"2\" cx=\"" + X(p.x) + "\" cy=\"" + Y(p.y) +
           "\" r=\"" + fmt(r * 1.5) + "\"/>\n";
    }
    prev = p;
  }
  const Point2 st = episode.start.position();
  s += "<circle fill=\"#2a9d2a\" cx=\"" + X(st.x) + "\" cy=\"" + Y(st.y) + "\" r=\"" + fmt(r * 1.5) + "\"/>\n";
  s += "<circle fill=\"none\" stroke=\"#9467bd\" stroke-width=\"2\" cx=\"" + X(episode.goal.x) + "\" cy=\"" +
       Y(episode.goal.y) + "\" r=\"" + fmt(r * 2) + "\"/>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace vlnce

#endif  // VLNCE_SVG_HPP
