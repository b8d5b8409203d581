#ifndef VLNCE_TRAJECTORY_HPP
#define VLNCE_TRAJECTORY_HPP

#include <string>
#include <string_view>
#include <vector>

#include "vlnce/errors.hpp"
#include "vlnce/geometry.hpp"
#include "vlnce/world.hpp"

namespace vlnce {

/// Why a step was charged. Scan turns come from panoramic scans, executed actions from a
/// subgoal's action sequence, tried actions from tryout escape attempts.
enum class ChargeKind { ScanTurn, Executed, Tried };

inline const char* to_string(ChargeKind k) {
  switch (k) {
    case ChargeKind::ScanTurn: return "scan";
    case ChargeKind::Executed: return "executed";
    case ChargeKind::Tried: return "tried";
  }
  return "?";
}

inline ChargeKind charge_kind_from_string(std::string_view s) {
  if (s == "scan") return ChargeKind::ScanTurn;
  if (s == "executed") return ChargeKind::Executed;
  if (s == "tried") return ChargeKind::Tried;
  throw ValidationError("unknown step kind '" + std::string(s) + "'");
}

struct StepRecord {
  Pose pose;  // pose after the action
  LowLevelAction action = LowLevelAction::Forward;
  ChargeKind kind = ChargeKind::Executed;
  bool collided = false;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

/// Every charged action of an episode, in order, after the start pose.
struct TrajectoryLog {
  Pose start;
  std::vector<StepRecord> steps;

  std::size_t total_steps() const { return steps.size(); }

  /// Start position followed by the position after every charged action.
  Polyline positions() const {
    Polyline out;
    out.reserve(steps.size() + 1);
    out.push_back(start.position());
    for (const auto& s : steps) out.push_back(s.pose.position());
    return out;
  }

  Pose final_pose() const { return steps.empty() ? start : steps.back().pose; }

  friend bool operator==(const TrajectoryLog&, const TrajectoryLog&) = default;
};

/// Per-episode action budget. Every charged action goes through here, so the log and the
/// counters cannot drift apart.
class StepBudget {
 public:
  StepBudget(int max_steps, const Pose& start) : max_steps_(max_steps) { log_.start = start; }

  int max_steps() const { return max_steps_; }
  int used() const { return static_cast<int>(log_.steps.size()); }
  int remaining() const { return max_steps_ - used(); }
  bool exhausted() const { return used() >= max_steps_; }

  int scan_turns() const { return scan_turns_; }
  int executed() const { return executed_; }
  int tried() const { return tried_; }
  int scans() const { return scans_; }
  int collisions() const { return collisions_; }

  /// Counts full scans only; an interrupted scan leaves its turns in scan_turns().
  void note_scan_completed() { ++scans_; }

  /// Records one action. Callers must check exhausted() first.
  void charge(ChargeKind kind, LowLevelAction action, const Pose& after, bool collided) {
    if (exhausted()) throw ContractError("step budget already exhausted");
    log_.steps.push_back({after, action, kind, collided});
    switch (kind) {
      case ChargeKind::ScanTurn: ++scan_turns_; break;
      case ChargeKind::Executed: ++executed_; break;
      case ChargeKind::Tried: ++tried_; break;
    }
    if (collided) ++collisions_;
  }

  const TrajectoryLog& log() const { return log_; }
  TrajectoryLog release_log() { return std::move(log_); }

 private:
  int max_steps_;
  int scan_turns_ = 0;
  int executed_ = 0;
  int tried_ = 0;
  int scans_ = 0;
  int collisions_ = 0;
  TrajectoryLog log_;
};

}  // namespace vlnce

#endif  // VLNCE_TRAJECTORY_HPP
