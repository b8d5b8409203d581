// One line per acceptance criterion; exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>

#include "vlnce/vlnce.hpp"

using namespace vlnce;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double dtw_memo(const Polyline& p, const Polyline& r) {
  std::map<std::pair<std::size_t, std::size_t>, double> memo;
  std::function<double(std::size_t, std::size_t)> f = [&](std::size_t i, std::size_t j) -> double {
    if (const auto it = memo.find({i, j}); it != memo.end()) return it->second;
    const double c = distance(p[i], r[j]);
    double v;
    if (i == 0 && j == 0) v = c;
    else if (i == 0) v = c + f(0, j - 1);
    else if (j == 0) v = c + f(i - 1, 0);
    else v = c + std::min({f(i - 1, j), f(i, j - 1), f(i - 1, j - 1)});
    return memo[{i, j}] = v;
  };
  return f(p.size() - 1, r.size() - 1);
}

void dtw_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_int_distribution<int> len(1, 12);
  int mismatches = 0;
  for (int k = 0; k < 1000; ++k) {
    Polyline p(len(rng)), r(len(rng));
    for (auto& q : p) q = {u(rng), u(rng)};
    for (auto& q : r) q = {u(rng), u(rng)};
    if (dtw(p, r) != dtw_memo(p, r)) ++mismatches;
  }
  const double t = seconds_since(t0);
  report(1, "dtw matches memoized oracle", mismatches == 0 && t < 10.0,
         fmt("%d/1000 mismatches, %.2f s", mismatches, t));
}

void ndtw_checks() {
  const SimConfig cfg;
  const Polyline r{{0, 0}, {0.25, 0}, {0.5, 0}, {0.75, 0}, {1.0, 0}};
  const double id = ndtw(r, r, cfg);
  Polyline p = r;
  for (auto& q : p) q.y += cfg.dtw_threshold;
  const double e = ndtw(p, r, cfg);
  report(2, "ndtw analytic values", std::abs(id - 1.0) <= 1e-12 && std::abs(e - std::exp(-1.0)) <= 1e-9,
         fmt("identity %.15f, engineered %.15f (e^-1 %.15f)", id, e, std::exp(-1.0)));
}

void collision_semantics() {
  std::mt19937_64 rng(77);
  int bad_strict = 0, bad_slide = 0, samples = 0;
  while (samples < 10000) {
    OccupancyGrid g("acc", 16, 16, 0.25);
    std::bernoulli_distribution wall(0.3);
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) g.set_blocked({x, y}, wall(rng));
    std::uniform_real_distribution<double> u(0.0, 4.0);
    const Point2 p{u(rng), u(rng)};
    if (!g.navigable(p)) continue;
    const Pose pose{p.x, p.y, static_cast<int>(rng() % 12) * 30};
    ++samples;
    SimConfig strict;
    const Pose a = step_action(g, pose, LowLevelAction::Forward, strict).pose;
    const double da = distance(a.position(), p);
    if (!(da == 0.0 || std::abs(da - 0.25) <= 1e-12) || !g.navigable(a.position())) ++bad_strict;
    SimConfig slide;
    slide.sliding_allowed = true;
    const Pose b = step_action(g, pose, LowLevelAction::Forward, slide).pose;
    if (distance(b.position(), p) > 0.25 + 1e-12 || !g.navigable(b.position())) ++bad_slide;
  }
  report(3, "collision semantics", bad_strict == 0 && bad_slide == 0,
         fmt("%d samples, %d strict violations, %d sliding violations", samples, bad_strict, bad_slide));
}

void step_accounting() {
  GenParams p;
  p.seed = 31;
  p.width = 48;
  p.height = 48;
  p.episode_count = 12;
  const auto s = generate_scene(p);
  int bad = 0, episodes = 0, exhausted = 0;
  for (const int max_steps : {40, 150, 500}) {
    for (const std::string planner : {"greedy", "oracle", "random"}) {
      RunConfig cfg;
      cfg.planner = planner;
      cfg.sim.max_steps = max_steps;
      for (const auto& r : run_suite(s.grid, s.episodes, cfg).episodes) {
        ++episodes;
        const auto& t = r.tally;
        const int partial = r.end == EpisodeEnd::BudgetExhausted ? t.scan_turns - 12 * t.scans : 0;
        if (r.steps() != 12 * t.scans + partial + t.executed + t.tried) ++bad;
        if (partial < 0 || partial >= 12) ++bad;
        if (r.end == EpisodeEnd::BudgetExhausted) {
          ++exhausted;
          if (r.steps() != max_steps) ++bad;
        } else if (r.steps() > max_steps) {
          ++bad;
        }
      }
    }
  }
  report(4, "step accounting", bad == 0 && exhausted > 0,
         fmt("%d episodes (%d hit the budget), %d violations", episodes, exhausted, bad));
}

void trap_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  GenParams p;
  p.seed = 7;
  p.width = 64;
  p.height = 64;
  p.trap_count = 6;
  p.episode_count = 50;
  p.lure_fraction = 0.8;
  const auto s = generate_scene(p);
  RunConfig cfg;
  cfg.planner = "greedy";
  cfg.seed = 7;
  const auto rows = run_ablation_grid(s.grid, s.episodes, cfg);
  const double off_off = rows[0].aggregate.success;
  const double on_off = rows[1].aggregate.success;
  const double off_on = rows[2].aggregate.success;
  const double t = seconds_since(t0);
  const bool ok = off_on - off_off >= 0.20 && on_off >= off_off && t < 60.0;
  report(5, "trap suite ablation direction", ok,
         fmt("SR off/off %.1f%%, on/off %.1f%%, off/on %.1f%%, on/on %.1f%%, %.2f s", 100 * off_off, 100 * on_off,
             100 * off_on, 100 * rows[3].aggregate.success, t));
}

void perfect_run() {
  const auto s = generate_corridor_suite(20, 96, 3, 0.25, 11);
  RunConfig cfg;
  cfg.planner = "oracle";
  const auto r = run_suite(s.grid, s.episodes, cfg);
  const auto& m = r.aggregate;
  report(6, "oracle on open corridors", m.success == 1.0 && m.spl >= 0.9 && m.ndtw >= 0.9,
         fmt("%zu episodes, SR %.4f, SPL %.4f, NDTW %.4f", r.evaluated, m.success, m.spl, m.ndtw));
}

void determinism() {
  GenParams p;
  p.seed = 5;
  p.width = 48;
  p.height = 48;
  p.episode_count = 10;
  const auto s = generate_scene(p);
  RunConfig cfg;
  cfg.planner = "ensemble:greedy,random";
  cfg.seed = 99;
  const std::string a = ablation_csv(run_ablation_grid(s.grid, s.episodes, cfg));
  cfg.jobs = 4;
  const std::string b = ablation_csv(run_ablation_grid(s.grid, s.episodes, cfg));
  report(7, "ablate csv determinism", a == b, fmt("%zu bytes, %s", a.size(), a == b ? "identical" : "differ"));
}

void waypoint_soundness() {
  std::mt19937_64 rng(8);
  SimConfig cfg;
  int samples = 0, waypoints = 0, bad = 0;
  while (samples < 1000) {
    OccupancyGrid g("wp", 24, 24, 0.25);
    std::bernoulli_distribution wall(0.2);
    for (int y = 0; y < 24; ++y)
      for (int x = 0; x < 24; ++x) g.set_blocked({x, y}, wall(rng));
    std::uniform_real_distribution<double> u(0.0, 6.0);
    const Point2 p{u(rng), u(rng)};
    if (!g.navigable(p)) continue;
    ++samples;
    const Pose pose{p.x, p.y, static_cast<int>(rng() % 12) * 30};
    StepBudget budget(100, pose);
    const auto scan = panoramic_scan(g, pose, cfg, budget);
    for (const auto& wp : predict_waypoints(*scan, pose, g, cfg, WaypointConfig{}).waypoints) {
      ++waypoints;
      Pose at = pose;
      bool collided = false;
      for (const auto a : subgoal_to_actions({static_cast<double>(wp.rel_heading), wp.distance}, cfg)) {
        const auto r = step_action(g, at, a, cfg);
        collided |= r.collided;
        at = r.pose;
      }
      if (collided || distance(at.position(), wp.abs_position) > 1e-9) ++bad;
    }
  }
  report(8, "waypoint soundness", bad == 0, fmt("%d samples, %d waypoints, %d unsound", samples, waypoints, bad));
}

}  // namespace

int main() {
  dtw_oracle();
  ndtw_checks();
  collision_semantics();
  step_accounting();
  trap_suite();
  perfect_run();
  determinism();
  waypoint_soundness();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
