#ifndef VLNCE_PERCEIVE_HPP
#define VLNCE_PERCEIVE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "vlnce/config.hpp"
#include "vlnce/geometry.hpp"
#include "vlnce/trajectory.hpp"
#include "vlnce/world.hpp"

namespace vlnce {

struct DepthView {
  int rel_heading = 0;  // degrees relative to the heading at scan start
  double depth = 0.0;
};

struct PanoramicScan {
  std::vector<DepthView> views;  // ordered by rel_heading, 0 .. 360 - turn_increment
  int steps_consumed = 0;
};

/// Rotates the agent through a full turn, one depth ray per heading. Each rotation is charged to
/// the budget. Returns nullopt if the budget runs out mid-scan; the turns that did happen stay
/// charged and logged.
inline std::optional<PanoramicScan> panoramic_scan(const OccupancyGrid& grid, const Pose& pose,
                                                   const SimConfig& cfg, StepBudget& budget) {
  PanoramicScan scan;
  Pose current = pose;
  const int views = cfg.views_per_scan();
  for (int k = 0; k < views; ++k) {
    scan.views.push_back({k * cfg.turn_increment, raycast(grid, current, current.heading, cfg)});
    if (budget.exhausted()) return std::nullopt;
    const StepResult r = step_action(grid, current, LowLevelAction::TurnLeft, cfg);
    current = r.pose;
    budget.charge(ChargeKind::ScanTurn, LowLevelAction::TurnLeft, current, false);
    ++scan.steps_consumed;
  }
  budget.note_scan_completed();
  return scan;
}

struct Waypoint {
  int rel_heading = 0;  // multiple of turn_increment, relative to the scan heading
  double distance = 0.0;
  Point2 abs_position;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

/// The local navigation graph around the agent: one node per navigable heading.
struct CandidateSet {
  std::vector<Waypoint> waypoints;

  std::size_t size() const { return waypoints.size(); }
  bool empty() const { return waypoints.empty(); }
  const Waypoint& operator[](std::size_t i) const { return waypoints[i]; }
};

struct WaypointConfig {
  double min_distance = 0.25;
  double max_distance = 3.0;
  double clearance = 0.25;
  int max_candidates = 12;
};

/// Geometric stand-in for a learned waypoint predictor. It reads only the scan depths to place
/// waypoints; the grid is used to replay the forward steps so the reported position matches
/// exactly where execution will leave the agent.
inline CandidateSet predict_waypoints(const PanoramicScan& scan, const Pose& pose, const OccupancyGrid& grid,
                                      const SimConfig& cfg, const WaypointConfig& wcfg = {}) {
  struct Scored {
    Waypoint wp;
    double depth;
  };
  std::vector<Scored> found;
  const double step = cfg.forward_step;
  SimConfig strict = cfg;
  strict.sliding_allowed = false;
  for (const DepthView& view : scan.views) {
    if (view.depth < wcfg.min_distance + wcfg.clearance) continue;
    const double wanted = std::min(view.depth - wcfg.clearance, wcfg.max_distance);
    long steps = std::lround(wanted / step);
    while (steps > 0 && steps * step > wcfg.max_distance + 1e-9) --steps;

    // Walk it. Stops at the first step that would collide.
    Pose at{pose.x, pose.y, wrap_degrees(pose.heading + view.rel_heading)};
    long taken = 0;
    for (; taken < steps; ++taken) {
      const StepResult r = step_action(grid, at, LowLevelAction::Forward, strict);
      if (r.collided) break;
      at = r.pose;
    }
    const double dist = static_cast<double>(taken) * step;
    if (taken == 0 || dist < wcfg.min_distance - 1e-9) continue;
    found.push_back({{view.rel_heading, dist, at.position()}, view.depth});
  }

  if (static_cast<int>(found.size()) > wcfg.max_candidates) {
    std::stable_sort(found.begin(), found.end(), [](const Scored& a, const Scored& b) { return a.depth > b.depth; });
    found.resize(static_cast<std::size_t>(std::max(0, wcfg.max_candidates)));
    std::sort(found.begin(), found.end(),
              [](const Scored& a, const Scored& b) { return a.wp.rel_heading < b.wp.rel_heading; });
  }
  CandidateSet out;
  for (auto& s : found) out.waypoints.push_back(s.wp);
  return out;
}

}  // namespace vlnce

#endif  // VLNCE_PERCEIVE_HPP
