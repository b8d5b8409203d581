#ifndef VLNCE_HARNESS_HPP
#define VLNCE_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "vlnce/config.hpp"
#include "vlnce/control.hpp"
#include "vlnce/metrics.hpp"
#include "vlnce/perceive.hpp"
#include "vlnce/plan.hpp"
#include "vlnce/scenegen.hpp"
#include "vlnce/trajectory.hpp"
#include "vlnce/world.hpp"

namespace vlnce {

struct RunConfig {
  SimConfig sim;
  WaypointConfig waypoints;
  TryoutConfig tryout;
  std::string planner = "greedy";
  std::uint64_t seed = 0;
  std::size_t history_capacity = 64;
  int jobs = 1;

  void validate() const {
    sim.validate();
    tryout.validate(sim);
    if (jobs < 1) throw ConfigError("jobs must be at least 1");
    make_planner(planner, seed);  // rejects unknown names early
  }
};

enum class EpisodeEnd { Stopped, BudgetExhausted, Unrecoverable, Skipped };

inline const char* to_string(EpisodeEnd e) {
  switch (e) {
    case EpisodeEnd::Stopped: return "stopped";
    case EpisodeEnd::BudgetExhausted: return "budget_exhausted";
    case EpisodeEnd::Unrecoverable: return "unrecoverable";
    case EpisodeEnd::Skipped: return "skipped";
  }
  return "?";
}

inline EpisodeEnd episode_end_from_string(std::string_view s) {
  if (s == "stopped") return EpisodeEnd::Stopped;
  if (s == "budget_exhausted") return EpisodeEnd::BudgetExhausted;
  if (s == "unrecoverable") return EpisodeEnd::Unrecoverable;
  if (s == "skipped") return EpisodeEnd::Skipped;
  throw ValidationError("unknown termination '" + std::string(s) + "'");
}

struct StepTally {
  int scans = 0;
  int scan_turns = 0;
  int executed = 0;
  int tried = 0;
  int collisions = 0;
  int escapes = 0;
  int decisions = 0;
};

struct EpisodeResult {
  std::string episode_id;
  EpisodeEnd end = EpisodeEnd::Stopped;
  TrajectoryLog log;
  MetricsReport metrics;
  StepTally tally;
  std::string diagnostic;  // set when skipped

  bool skipped() const { return end == EpisodeEnd::Skipped; }
  int steps() const { return static_cast<int>(log.total_steps()); }
};

/// One episode through the scan -> predict -> plan -> control loop until the planner stops,
/// the controller gives up, or the step budget runs out.
inline EpisodeResult run_episode(const Episode& episode, const OccupancyGrid& grid, const RunConfig& cfg,
                                 Planner& planner) {
  EpisodeResult res;
  res.episode_id = episode.id;
  res.log.start = episode.start;
  try {
    validate_episode(grid, episode);
    if (!geodesic_distance(grid, episode.start.position(), episode.goal))
      throw ValidationError("goal unreachable from start", episode.id);
  } catch (const std::exception& e) {
    res.end = EpisodeEnd::Skipped;
    res.diagnostic = e.what();
    return res;
  }

  StepBudget budget(cfg.sim.max_steps, episode.start);
  History history(cfg.history_capacity);
  planner.reset(episode);
  Pose pose = episode.start;

  while (true) {
    const auto scan = panoramic_scan(grid, pose, cfg.sim, budget);
    if (!scan) {
      res.end = EpisodeEnd::BudgetExhausted;
      break;
    }
    const CandidateSet cands = predict_waypoints(*scan, pose, grid, cfg.sim, cfg.waypoints);
    const PlanDecision decision = planner.decide({episode, pose, cands, history, cfg.sim});
    ++res.tally.decisions;

    HistoryRecord rec;
    rec.step_index = budget.used();
    rec.pose_at_decision = pose;
    for (const auto& v : scan->views) rec.scan_summary.push_back(v.depth);
    if (!decision.is_stop()) {
      const Waypoint& wp = cands[decision.index()];
      rec.chosen = ChosenSubgoal{wp.rel_heading, wp.distance};
    }
    history.push(std::move(rec));

    if (decision.is_stop()) {
      res.end = EpisodeEnd::Stopped;
      break;
    }
    const Waypoint& wp = cands[decision.index()];
    const ControlOutcome outcome =
        execute_with_tryout(grid, pose, Subgoal{static_cast<double>(wp.rel_heading), wp.distance}, cfg.sim, budget,
                            cfg.tryout);
    pose = outcome.final_pose;
    res.tally.escapes += outcome.escapes;
    if (outcome.terminated_by == Termination::BudgetExhausted) {
      res.end = EpisodeEnd::BudgetExhausted;
      break;
    }
    if (outcome.terminated_by == Termination::Unrecoverable) {
      res.end = EpisodeEnd::Unrecoverable;
      break;
    }
  }

  res.tally.scans = budget.scans();
  res.tally.scan_turns = budget.scan_turns();
  res.tally.executed = budget.executed();
  res.tally.tried = budget.tried();
  res.tally.collisions = budget.collisions();
  res.log = budget.release_log();
  res.metrics = evaluate_episode(episode, res.log, grid, cfg.sim);
  return res;
}

struct RunResult {
  std::vector<EpisodeResult> episodes;  // same order as the input episode list
  MetricsReport aggregate;              // means over non-skipped episodes
  std::size_t evaluated = 0;
};

inline MetricsReport aggregate_results(std::span<const EpisodeResult> results, std::size_t* evaluated = nullptr) {
  std::vector<MetricsReport> reports;
  for (const auto& r : results)
    if (!r.skipped()) reports.push_back(r.metrics);
  if (evaluated) *evaluated = reports.size();
  return mean_metrics(reports);
}

/// Runs every episode with a fresh planner. With jobs > 1 episodes run on worker threads; the
/// output order and content do not depend on scheduling.
inline RunResult run_suite(const OccupancyGrid& grid, std::span<const Episode> episodes, const RunConfig& cfg) {
  cfg.validate();
  RunResult out;
  out.episodes.resize(episodes.size());
  const auto work = [&](std::size_t i) {
    auto planner = make_planner(cfg.planner, cfg.seed);
    out.episodes[i] = run_episode(episodes[i], grid, cfg, *planner);
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), episodes.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < episodes.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < episodes.size(); i = next++) {
            try {
              work(i);
            } catch (...) {
              const std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
            }
          }
        });
    }
    if (failure) std::rethrow_exception(failure);
  }
  out.aggregate = aggregate_results(out.episodes, &out.evaluated);
  return out;
}

struct AblationRow {
  bool sliding = false;
  bool tryout = false;
  MetricsReport aggregate;
  std::size_t evaluated = 0;

  std::string label() const {
    return std::string("sliding=") + (sliding ? "on" : "off") + " tryout=" + (tryout ? "on" : "off");
  }
};

/// The sliding x tryout grid with everything else held fixed.
inline std::vector<AblationRow> run_ablation_grid(const OccupancyGrid& grid, std::span<const Episode> episodes,
                                                  const RunConfig& base) {
  std::vector<AblationRow> rows;
  for (const auto& [sliding, tryout] : {std::pair{false, false}, std::pair{true, false}, std::pair{false, true},
                                        std::pair{true, true}}) {
    RunConfig cfg = base;
    cfg.sim.sliding_allowed = sliding;
    cfg.tryout.enabled = tryout;
    const RunResult r = run_suite(grid, episodes, cfg);
    rows.push_back({sliding, tryout, r.aggregate, r.evaluated});
  }
  return rows;
}

inline std::string format_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string metrics_csv(std::span<const EpisodeResult> results) {
  std::string out = "episode_id,PL,NE,SR,SPL,NDTW,SDTW,steps,terminated_by\n";
  for (const auto& r : results) {
    const auto& m = r.metrics;
    out += r.episode_id + ',';
    if (r.skipped()) {
      out += ",,,,,,0,skipped\n";
      continue;
    }
    for (const double v : {m.path_length, m.navigation_error, m.success, m.spl, m.ndtw, m.sdtw})
      out += format_metric(v) + ',';
    out += std::to_string(r.steps()) + ',' + to_string(r.end) + '\n';
  }
  return out;
}

inline std::string ablation_csv(std::span<const AblationRow> rows) {
  std::string out = "sliding,tryout,episodes,PL,NE,SR,SPL,NDTW,SDTW\n";
  for (const auto& row : rows) {
    const auto& m = row.aggregate;
    out += std::string(row.sliding ? "on" : "off") + ',' + (row.tryout ? "on" : "off") + ',' +
           std::to_string(row.evaluated);
    for (const double v : {m.path_length, m.navigation_error, m.success, m.spl, m.ndtw, m.sdtw})
      out += ',' + format_metric(v);
    out += '\n';
  }
  return out;
}

/// Human-readable summary with the usual leaderboard columns; rates shown in percent.
inline std::string summary_table(const MetricsReport& m, std::size_t evaluated) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "episodes %zu\n%8s %8s %8s %8s %8s %8s\n%8.2f %8.2f %8.2f %8.2f %8.2f %8.2f\n", evaluated, "PL",
                "NE", "SR", "SPL", "NDTW", "SDTW", m.path_length, m.navigation_error, 100.0 * m.success,
                100.0 * m.spl, 100.0 * m.ndtw, 100.0 * m.sdtw);
  return buf;
}

}  // namespace vlnce

#endif  // VLNCE_HARNESS_HPP
