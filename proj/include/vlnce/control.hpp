#ifndef VLNCE_CONTROL_HPP
#define VLNCE_CONTROL_HPP

#include <cmath>
#include <cstdlib>
#include <string_view>
#include <vector>

#include "vlnce/config.hpp"
#include "vlnce/errors.hpp"
#include "vlnce/geometry.hpp"
#include "vlnce/trajectory.hpp"
#include "vlnce/world.hpp"

namespace vlnce {

/// A planner-selected target relative to the agent: turn by rel_heading, then travel distance.
struct Subgoal {
  double rel_heading = 0.0;  // degrees, counter-clockwise positive
  double distance = 0.0;     // meters
};

enum class Termination { Completed, BudgetExhausted, Unrecoverable };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::BudgetExhausted: return "budget_exhausted";
    case Termination::Unrecoverable: return "unrecoverable";
  }
  return "?";
}

struct ControlOutcome {
  Pose final_pose;
  int executed_actions = 0;
  int tried_actions = 0;
  int collisions = 0;
  int escapes = 0;
  Termination terminated_by = Termination::Completed;
};

struct TryoutConfig {
  bool enabled = true;
  /// Escape headings relative to the heading at the deadlock, tried in order.
  std::vector<int> directions{30, -30, 60, -60, 90, -90};
  /// After an escape, re-plan toward the original absolute target (true) or replay the
  /// remaining actions as they were (false).
  bool reaim = true;
  /// Escapes allowed within one subgoal before it is declared unrecoverable.
  int max_escapes = 10;

  void validate(const SimConfig& cfg) const {
    for (const int d : directions)
      if (d % cfg.turn_increment != 0) throw ConfigError("tryout direction " + std::to_string(d) + " is not a multiple of the turn increment");
    if (max_escapes < 0) throw ConfigError("max_escapes must be non-negative");
  }
};

/// Turns first (nearest multiple of the turn increment, exact halves go left), then forwards.
inline std::vector<LowLevelAction> subgoal_to_actions(const Subgoal& sub, const SimConfig& cfg) {
  std::vector<LowLevelAction> out;
  const double rel = normalize_signed_degrees(sub.rel_heading);
  const long turns = static_cast<long>(std::floor(rel / cfg.turn_increment + 0.5));
  out.insert(out.end(), static_cast<std::size_t>(std::labs(turns)),
             turns > 0 ? LowLevelAction::TurnLeft : LowLevelAction::TurnRight);
  const long forwards = std::lround(sub.distance / cfg.forward_step);
  out.insert(out.end(), static_cast<std::size_t>(std::max(0L, forwards)), LowLevelAction::Forward);
  return out;
}

inline bool detect_deadlock(const Pose& before, const Pose& after, const SimConfig& cfg) {
  return distance(before.position(), after.position()) < cfg.deadlock_epsilon;
}

/// Executes a subgoal, charging every action to `budget`. A Forward that fails to move the
/// agent triggers one tryout round (when enabled): rotate to each escape direction in turn and
/// try a single Forward. All tryout actions count as tried actions.
inline ControlOutcome execute_with_tryout(const OccupancyGrid& grid, const Pose& start, const Subgoal& sub,
                                          const SimConfig& cfg, StepBudget& budget,
                                          const TryoutConfig& tryout = {}) {
  ControlOutcome out;
  Pose pose = start;
  const Point2 target = start.position() + sub.distance * heading_vector(start.heading + sub.rel_heading);

  const auto finish = [&](Termination t) {
    out.final_pose = pose;
    out.terminated_by = t;
    return out;
  };
  // Returns false when the budget is exhausted and nothing happened.
  const auto act = [&](ChargeKind kind, LowLevelAction a) {
    if (budget.exhausted()) return false;
    const StepResult r = step_action(grid, pose, a, cfg);
    budget.charge(kind, a, r.pose, r.collided);
    pose = r.pose;
    (kind == ChargeKind::Tried ? out.tried_actions : out.executed_actions)++;
    if (r.collided) ++out.collisions;
    return true;
  };

  std::vector<LowLevelAction> actions = subgoal_to_actions(sub, cfg);
  const bool tryout_active = tryout.enabled && !tryout.directions.empty();
  for (std::size_t i = 0; i < actions.size();) {
    const LowLevelAction a = actions[i++];
    const Pose before = pose;
    if (!act(ChargeKind::Executed, a)) return finish(Termination::BudgetExhausted);
    if (a != LowLevelAction::Forward || !detect_deadlock(before, pose, cfg) || !tryout_active) continue;

    if (out.escapes >= tryout.max_escapes) return finish(Termination::Unrecoverable);
    const int stuck_heading = pose.heading;
    bool escaped = false;
    for (const int dir : tryout.directions) {
      const double turn = normalize_signed_degrees(wrap_degrees(stuck_heading + dir) - pose.heading);
      const long n = std::lround(turn / cfg.turn_increment);
      for (long k = 0; k < std::labs(n); ++k)
        if (!act(ChargeKind::Tried, n > 0 ? LowLevelAction::TurnLeft : LowLevelAction::TurnRight))
          return finish(Termination::BudgetExhausted);
      const Pose probe = pose;
      if (!act(ChargeKind::Tried, LowLevelAction::Forward)) return finish(Termination::BudgetExhausted);
      if (!detect_deadlock(probe, pose, cfg)) {
        escaped = true;
        break;
      }
    }
    if (!escaped) return finish(Termination::Unrecoverable);
    ++out.escapes;
    if (tryout.reaim) {
      const Subgoal fresh{bearing_degrees(pose.position(), target) - pose.heading, distance(pose.position(), target)};
      actions = subgoal_to_actions(fresh, cfg);
      // Already within half a step of the target: turning toward it would only burn budget.
      if (std::lround(fresh.distance / cfg.forward_step) == 0) actions.clear();
      i = 0;
    }
  }
  return finish(Termination::Completed);
}

}  // namespace vlnce

#endif  // VLNCE_CONTROL_HPP
