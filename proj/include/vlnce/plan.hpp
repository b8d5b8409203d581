#ifndef VLNCE_PLAN_HPP
#define VLNCE_PLAN_HPP

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vlnce/config.hpp"
#include "vlnce/errors.hpp"
#include "vlnce/geometry.hpp"
#include "vlnce/perceive.hpp"
#include "vlnce/scenegen.hpp"

namespace vlnce {

struct ChosenSubgoal {
  int rel_heading = 0;
  double distance = 0.0;
  friend bool operator==(const ChosenSubgoal&, const ChosenSubgoal&) = default;
};

struct HistoryRecord {
  int step_index = 0;
  Pose pose_at_decision;
  std::optional<ChosenSubgoal> chosen;  // nullopt means Stop
  std::vector<double> scan_summary;     // depth per scan view
};

/// Bounded navigation memory. Oldest records are evicted once capacity is reached.
class History {
 public:
  explicit History(std::size_t capacity = 64) : capacity_(capacity) {
    if (capacity == 0) throw ConfigError("history capacity must be positive");
  }

  void push(HistoryRecord record) {
    if (!records_.empty() && record.step_index <= records_.back().step_index)
      throw ContractError("history step_index must increase: got " + std::to_string(record.step_index) +
                          " after " + std::to_string(records_.back().step_index));
    records_.push_back(std::move(record));
    if (records_.size() > capacity_) records_.pop_front();
  }

  const std::deque<HistoryRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::deque<HistoryRecord> records_;
};

inline History update_history(History history, HistoryRecord record) {
  history.push(std::move(record));
  return history;
}

class PlanDecision {
 public:
  static PlanDecision stop() { return PlanDecision(kStop); }
  static PlanDecision go_to(std::size_t index) { return PlanDecision(index); }

  bool is_stop() const { return index_ == kStop; }
  std::size_t index() const {
    if (is_stop()) throw ContractError("Stop decision has no waypoint index");
    return index_;
  }
  friend bool operator==(const PlanDecision&, const PlanDecision&) = default;

 private:
  static constexpr std::size_t kStop = std::numeric_limits<std::size_t>::max();
  explicit PlanDecision(std::size_t i) : index_(i) {}
  std::size_t index_;
};

/// Options are laid out as [Stop, candidate 0, candidate 1, ...]. Highest score wins; ties go to
/// Stop, then to the lowest candidate index.
inline PlanDecision decision_from_scores(std::span<const double> scores) {
  if (scores.empty()) throw ContractError("score vector must include the Stop option");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = i;
  return best == 0 ? PlanDecision::stop() : PlanDecision::go_to(best - 1);
}

inline std::vector<double> one_hot(const PlanDecision& d, std::size_t candidates) {
  std::vector<double> s(candidates + 1, 0.0);
  s[d.is_stop() ? 0 : d.index() + 1] = 1.0;
  return s;
}

struct PlanContext {
  const Episode& episode;
  const Pose& pose;
  const CandidateSet& candidates;
  const History& history;
  const SimConfig& cfg;
};

/// A planner scores Stop and every candidate. Implementations may keep per-episode state;
/// reset() is called before each episode.
class Planner {
 public:
  virtual ~Planner() = default;
  virtual std::string name() const = 0;
  virtual void reset(const Episode&) {}
  virtual std::vector<double> score(const PlanContext& ctx) = 0;

  PlanDecision decide(const PlanContext& ctx) { return decision_from_scores(score(ctx)); }
};

namespace detail {

/// argmin of distance(candidate, target); ties by smallest |rel_heading|, then lowest index.
inline std::size_t closest_candidate(const CandidateSet& cands, Point2 target) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  double best_turn = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const double d = distance(cands[i].abs_position, target);
    const double turn = std::abs(normalize_signed_degrees(cands[i].rel_heading));
    if (d < best_d || (d == best_d && turn < best_turn)) {
      best = i;
      best_d = d;
      best_turn = turn;
    }
  }
  return best;
}

inline bool near_goal(const PlanContext& ctx) {
  return distance(ctx.pose.position(), ctx.episode.goal) <= ctx.cfg.success_threshold;
}

/// Index of the farthest reference vertex within `threshold` of `p`, or `floor` if none is farther.
inline long farthest_reached(const Polyline& ref, Point2 p, double threshold, long floor) {
  for (long i = static_cast<long>(ref.size()) - 1; i > floor; --i)
    if (distance(p, ref[static_cast<std::size_t>(i)]) <= threshold) return i;
  return floor;
}

inline PlanDecision oracle_decision(const PlanContext& ctx, long cursor) {
  if (near_goal(ctx) || ctx.candidates.empty()) return PlanDecision::stop();
  const Polyline& ref = ctx.episode.reference_path;
  const auto next = static_cast<std::size_t>(std::min<long>(cursor + 1, static_cast<long>(ref.size()) - 1));
  return PlanDecision::go_to(closest_candidate(ctx.candidates, ref[next]));
}

}  // namespace detail

/// Reference-following planner. The progress cursor is rebuilt from the history and the current
/// pose, so the decision is a pure function of its inputs.
inline PlanDecision oracle_plan(const Episode& episode, const Pose& pose, const CandidateSet& candidates,
                                const History& history, const SimConfig& cfg) {
  const PlanContext ctx{episode, pose, candidates, history, cfg};
  long cursor = -1;
  for (const auto& r : history.records())
    cursor = detail::farthest_reached(episode.reference_path, r.pose_at_decision.position(), cfg.success_threshold, cursor);
  cursor = detail::farthest_reached(episode.reference_path, pose.position(), cfg.success_threshold, cursor);
  return detail::oracle_decision(ctx, cursor);
}

/// Stateful form of oracle_plan: the cursor also survives history eviction.
class OraclePlanner final : public Planner {
 public:
  std::string name() const override { return "oracle"; }
  void reset(const Episode&) override { cursor_ = -1; }
  std::vector<double> score(const PlanContext& ctx) override {
    const auto& ref = ctx.episode.reference_path;
    for (const auto& r : ctx.history.records())
      cursor_ = detail::farthest_reached(ref, r.pose_at_decision.position(), ctx.cfg.success_threshold, cursor_);
    cursor_ = detail::farthest_reached(ref, ctx.pose.position(), ctx.cfg.success_threshold, cursor_);
    return one_hot(detail::oracle_decision(ctx, cursor_), ctx.candidates.size());
  }
  long cursor() const { return cursor_; }

 private:
  long cursor_ = -1;
};

/// Picks the candidate closest to the goal in straight-line distance.
class GreedyGoalPlanner final : public Planner {
 public:
  std::string name() const override { return "greedy"; }
  std::vector<double> score(const PlanContext& ctx) override {
    if (detail::near_goal(ctx) || ctx.candidates.empty())
      return one_hot(PlanDecision::stop(), ctx.candidates.size());
    return one_hot(PlanDecision::go_to(detail::closest_candidate(ctx.candidates, ctx.episode.goal)),
                   ctx.candidates.size());
  }
};

/// Uniformly random candidate; stops under the same rule as the other baselines.
class RandomPlanner final : public Planner {
 public:
  explicit RandomPlanner(std::uint64_t seed) : seed_(seed), rng_(seed) {}
  std::string name() const override { return "random"; }
  void reset(const Episode& ep) override {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the episode id
    for (const unsigned char c : ep.id) h = (h ^ c) * 1099511628211ull;
    rng_ = SceneRng(seed_ ^ h);
  }
  std::vector<double> score(const PlanContext& ctx) override {
    if (detail::near_goal(ctx) || ctx.candidates.empty())
      return one_hot(PlanDecision::stop(), ctx.candidates.size());
    const auto pick = static_cast<std::size_t>(rng_.below(static_cast<int>(ctx.candidates.size())));
    return one_hot(PlanDecision::go_to(pick), ctx.candidates.size());
  }

 private:
  std::uint64_t seed_;
  SceneRng rng_;
};

/// Sums member scores per option and takes the argmax.
inline PlanDecision ensemble_plan(std::span<const std::vector<double>> member_scores) {
  if (member_scores.empty()) throw ConfigError("ensemble needs at least one member");
  std::vector<double> total(member_scores.front().size(), 0.0);
  for (const auto& s : member_scores) {
    if (s.size() != total.size()) throw ContractError("ensemble members disagree on option count");
    for (std::size_t i = 0; i < s.size(); ++i) total[i] += s[i];
  }
  return decision_from_scores(total);
}

class EnsemblePlanner final : public Planner {
 public:
  explicit EnsemblePlanner(std::vector<std::unique_ptr<Planner>> members) : members_(std::move(members)) {
    if (members_.empty()) throw ConfigError("ensemble needs at least one member");
  }
  std::string name() const override {
    std::string n = "ensemble:";
    for (std::size_t i = 0; i < members_.size(); ++i) n += (i ? "," : "") + members_[i]->name();
    return n;
  }
  void reset(const Episode& ep) override {
    for (auto& m : members_) m->reset(ep);
  }
  std::vector<double> score(const PlanContext& ctx) override {
    std::vector<double> total(ctx.candidates.size() + 1, 0.0);
    for (auto& m : members_) {
      const auto s = m->score(ctx);
      for (std::size_t i = 0; i < total.size(); ++i) total[i] += s[i];
    }
    return total;
  }

 private:
  std::vector<std::unique_ptr<Planner>> members_;
};

/// Builds a planner from "oracle", "greedy", "random" or "ensemble:<name>,<name>,...".
inline std::unique_ptr<Planner> make_planner(std::string_view name, std::uint64_t seed) {
  if (name == "oracle") return std::make_unique<OraclePlanner>();
  if (name == "greedy") return std::make_unique<GreedyGoalPlanner>();
  if (name == "random") return std::make_unique<RandomPlanner>(seed);
  constexpr std::string_view kEnsemble = "ensemble:";
  if (name.starts_with(kEnsemble)) {
    std::vector<std::unique_ptr<Planner>> members;
    std::string_view rest = name.substr(kEnsemble.size());
    std::uint64_t k = 0;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view name = rest.substr(0, comma);
      if (name.empty() || name.starts_with(kEnsemble))
        throw ConfigError("invalid ensemble member in '" + std::string(name) + "'");
      members.push_back(make_planner(name, seed + ++k));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return std::make_unique<EnsemblePlanner>(std::move(members));
  }
  throw ConfigError("unknown planner '" + std::string(name) + "'");
}

}  // namespace vlnce

#endif  // VLNCE_PLAN_HPP
