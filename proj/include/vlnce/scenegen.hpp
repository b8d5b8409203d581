#ifndef VLNCE_SCENEGEN_HPP
#define VLNCE_SCENEGEN_HPP

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vlnce/config.hpp"
#include "vlnce/errors.hpp"
#include "vlnce/geometry.hpp"
#include "vlnce/world.hpp"

namespace vlnce {

struct Episode {
  std::string id;
  std::string scene_id;
  Pose start;
  Point2 goal;
  Polyline reference_path;
  std::optional<std::string> instruction;
  std::optional<std::string> language;

  friend bool operator==(const Episode&, const Episode&) = default;
};

/// Throws ValidationError naming the episode when any Episode invariant is broken.
inline void validate_episode(const OccupancyGrid& grid, const Episode& ep) {
  const auto fail = [&](const std::string& why) { throw ValidationError(why, ep.id); };
  if (ep.scene_id != grid.id()) fail("scene_id '" + ep.scene_id + "' does not match scene '" + grid.id() + "'");
  if (wrap_degrees(ep.start.heading) != ep.start.heading) fail("start heading outside [0, 360)");
  if (!grid.navigable(ep.start.position())) fail("start is not navigable");
  if (!grid.navigable(ep.goal)) fail("goal is not navigable");
  if (ep.reference_path.empty()) fail("reference path is empty");
  if (!(ep.reference_path.front() == ep.start.position())) fail("reference path does not begin at start");
  if (!(ep.reference_path.back() == ep.goal)) fail("reference path does not end at goal");
  for (std::size_t i = 0; i < ep.reference_path.size(); ++i) {
    if (!grid.navigable(ep.reference_path[i])) fail("reference vertex " + std::to_string(i) + " is not navigable");
    if (i > 0 && !segment_clear(grid, ep.reference_path[i - 1], ep.reference_path[i]))
      fail("reference segment " + std::to_string(i) + " crosses an obstacle");
  }
}

/// Shortest 8-connected path between the containing cells, as cell centers with collinear
/// interior vertices removed. The first and last vertices are the exact start and goal points.
inline Polyline plan_reference_path(const OccupancyGrid& grid, Point2 start, Point2 goal) {
  require_navigable(grid, start, "start");
  require_navigable(grid, goal, "goal");
  const Cell cs = *grid.cell_of(start);
  const Cell cg = *grid.cell_of(goal);
  if (cs == cg) return {start};

  const auto cells = DistanceField(grid, cs, cg).path_to(cg);
  if (cells.empty()) throw NoPathError("goal is unreachable from start");

  Polyline out{start};
  for (std::size_t i = 1; i + 1 < cells.size(); ++i) {
    const int dx0 = cells[i].x - cells[i - 1].x, dy0 = cells[i].y - cells[i - 1].y;
    const int dx1 = cells[i + 1].x - cells[i].x, dy1 = cells[i + 1].y - cells[i].y;
    if (dx0 != dx1 || dy0 != dy1) out.push_back(grid.cell_center(cells[i]));
  }
  out.push_back(goal);
  return out;
}

/// Deterministic bit source. Distributions are hand-rolled so output does not depend on the
/// standard library's distribution implementations.
class SceneRng {
 public:
  explicit SceneRng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  int between(int lo, int hi) { return lo + below(hi - lo + 1); }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

enum class TrapKind { CulDeSac, CornerPocket };

struct GenParams {
  std::uint64_t seed = 1;
  int width = 64;
  int height = 64;
  double resolution = 0.25;
  double obstacle_density = 0.10;
  int trap_count = 3;
  int episode_count = 10;
  double min_geodesic = 5.0;
  int max_retries = 1000;
  int trap_length = 5;          // channel cells from opening to dead end
  double lure_fraction = 0.5;   // share of episodes whose straight line runs into a trap
  int turn_increment = 30;
  double success_threshold = 3.0;
  std::string scene_id;         // defaults to "scene-<seed>"

  void validate() const {
    if (width < 8 || height < 8) throw ConfigError("generated grids need at least 8x8 cells");
    if (!(resolution > 0.0)) throw ConfigError("resolution must be positive");
    if (!(obstacle_density >= 0.0 && obstacle_density < 1.0)) throw ConfigError("obstacle_density must lie in [0, 1)");
    if (trap_count < 0 || episode_count < 0 || max_retries < 1 || trap_length < 2)
      throw ConfigError("counts must be non-negative and trap_length at least 2");
    if (!(min_geodesic > success_threshold))
      throw ConfigError("min_geodesic must exceed success_threshold");
    if (turn_increment <= 0 || 360 % turn_increment != 0) throw ConfigError("turn_increment must divide 360");
  }
};

/// A stamped trap: where its opening is and which way the channel runs.
struct TrapSite {
  TrapKind kind = TrapKind::CulDeSac;
  Cell mouth;      // first channel cell
  Cell axis;       // unit step from the mouth into the channel
  Cell dead_end;   // last free channel cell
};

struct GeneratedScene {
  OccupancyGrid grid;
  std::vector<Episode> episodes;
  std::vector<TrapSite> traps;
};

namespace detail {

// Local trap frame: u runs from the mouth into the channel, v is lateral.
inline Cell trap_to_grid(Cell origin, Cell axis, int u, int v) {
  const Cell side{-axis.y, axis.x};
  return {origin.x + u * axis.x + v * side.x, origin.y + u * axis.y + v * side.y};
}

struct TrapStamp {
  std::vector<std::pair<int, int>> walls;
  std::vector<std::pair<int, int>> open;
  std::pair<int, int> dead_end;
};

inline TrapStamp trap_stamp(TrapKind kind, int length) {
  TrapStamp s;
  for (int u = -2; u <= -1; ++u)
    for (int v = -2; v <= 2; ++v) s.open.emplace_back(u, v);
  if (kind == TrapKind::CulDeSac) {
    for (int u = 0; u < length; ++u) {
      s.open.emplace_back(u, 0);
      s.walls.emplace_back(u, -1);
      s.walls.emplace_back(u, 1);
    }
    s.walls.emplace_back(length, -1);
    s.walls.emplace_back(length, 0);
    s.walls.emplace_back(length, 1);
    s.dead_end = {length - 1, 0};
    return s;
  }
  // Corner pocket: straight leg, then a 1-cell-wide bend to the left ending in a dead end.
  const int leg = length;
  const int bend = std::max(2, length / 2);
  for (int u = 0; u < leg; ++u) {
    s.open.emplace_back(u, 0);
    s.walls.emplace_back(u, -1);
    if (u < leg - 1) s.walls.emplace_back(u, 1);
  }
  s.walls.emplace_back(leg, -1);
  s.walls.emplace_back(leg, 0);
  s.walls.emplace_back(leg, 1);
  for (int v = 1; v <= bend; ++v) {
    s.open.emplace_back(leg - 1, v);
    s.walls.emplace_back(leg - 2, v);
    s.walls.emplace_back(leg, v);
  }
  s.walls.emplace_back(leg - 2, bend + 1);
  s.walls.emplace_back(leg - 1, bend + 1);
  s.walls.emplace_back(leg, bend + 1);
  s.dead_end = {leg - 1, bend};
  return s;
}

}  // namespace detail

/// Generates a scene and episodes. Pure function of `params`.
inline GeneratedScene generate_scene(const GenParams& params) {
  params.validate();
  SceneRng rng(params.seed);
  const std::string scene_id = params.scene_id.empty() ? "scene-" + std::to_string(params.seed) : params.scene_id;
  OccupancyGrid grid(scene_id, params.width, params.height, params.resolution);

  // Scattered rectangular clutter up to the requested density.
  const auto target = static_cast<std::size_t>(params.obstacle_density * static_cast<double>(grid.cell_count()));
  for (int attempts = 0; grid.obstacle_count() < target && attempts < 100000; ++attempts) {
    const int w = rng.between(1, 3);
    const int h = rng.between(1, 3);
    const int x0 = rng.below(params.width);
    const int y0 = rng.below(params.height);
    for (int y = y0; y < y0 + h; ++y)
      for (int x = x0; x < x0 + w; ++x) grid.set_blocked({x, y}, true);
  }

  // Trap stamps. Footprints (plus a one-cell margin) may not overlap each other.
  std::vector<TrapSite> traps;
  std::vector<std::uint8_t> reserved(grid.cell_count(), 0);
  static constexpr std::array<Cell, 4> kAxes{Cell{1, 0}, Cell{0, 1}, Cell{-1, 0}, Cell{0, -1}};
  for (int t = 0; t < params.trap_count; ++t) {
    const TrapKind kind = (t % 2 == 0) ? TrapKind::CulDeSac : TrapKind::CornerPocket;
    const auto stamp = detail::trap_stamp(kind, params.trap_length);
    bool placed = false;
    for (int attempt = 0; attempt < params.max_retries && !placed; ++attempt) {
      const Cell axis = kAxes[static_cast<std::size_t>(rng.below(4))];
      const Cell mouth{rng.below(params.width), rng.below(params.height)};
      std::vector<Cell> footprint;
      for (const auto& [u, v] : stamp.walls) footprint.push_back(detail::trap_to_grid(mouth, axis, u, v));
      for (const auto& [u, v] : stamp.open) footprint.push_back(detail::trap_to_grid(mouth, axis, u, v));
      bool ok = true;
      for (const Cell c : footprint) {
        for (int dy = -1; dy <= 1 && ok; ++dy)
          for (int dx = -1; dx <= 1 && ok; ++dx) {
            const Cell m{c.x + dx, c.y + dy};
            if (!grid.in_bounds(m) || reserved[grid.index(m)]) ok = false;
          }
        if (!ok) break;
      }
      if (!ok) continue;
      for (const Cell c : footprint) reserved[grid.index(c)] = 1;
      for (const auto& [u, v] : stamp.open) grid.set_blocked(detail::trap_to_grid(mouth, axis, u, v), false);
      for (const auto& [u, v] : stamp.walls) grid.set_blocked(detail::trap_to_grid(mouth, axis, u, v), true);
      traps.push_back({kind, mouth, axis,
                       detail::trap_to_grid(mouth, axis, stamp.dead_end.first, stamp.dead_end.second)});
      placed = true;
    }
    if (!placed) throw GenerationError("could not place trap " + std::to_string(t), params.seed);
  }

  std::vector<Cell> free_cells;
  for (std::size_t i = 0; i < grid.cell_count(); ++i)
    if (grid.free(grid.cell_at_index(i))) free_cells.push_back(grid.cell_at_index(i));
  if (free_cells.size() < 2) throw GenerationError("scene has fewer than two free cells", params.seed);

  const int headings = 360 / params.turn_increment;
  const auto make_episode = [&](int index, Cell s, Cell g) -> std::optional<Episode> {
    if (grid.blocked(s) || grid.blocked(g) || s == g) return std::nullopt;
    const auto geo = DistanceField(grid, s, g).meters(g);
    if (!geo || *geo < params.min_geodesic) return std::nullopt;
    Episode ep;
    char id[32];
    std::snprintf(id, sizeof id, "ep-%04d", index);
    ep.id = id;
    ep.scene_id = scene_id;
    const Point2 sp = grid.cell_center(s);
    ep.start = {sp.x, sp.y, rng.below(headings) * params.turn_increment};
    ep.goal = grid.cell_center(g);
    ep.reference_path = plan_reference_path(grid, sp, ep.goal);
    return ep;
  };

  std::vector<Episode> episodes;
  for (int i = 0; i < params.episode_count; ++i) {
    std::optional<Episode> ep;
    const bool lure = !traps.empty() && rng.unit() < params.lure_fraction;
    for (int attempt = 0; attempt < params.max_retries && !ep; ++attempt) {
      if (lure && attempt < params.max_retries / 2) {
        // Start in front of the mouth, goal behind the dead end: the straight line to the
        // goal runs down the channel.
        const TrapSite& trap = traps[static_cast<std::size_t>(i) % traps.size()];
        const int back = rng.between(2, 8);
        const int beyond = rng.between(2, 8);
        const int lateral = rng.between(-2, 2);
        const Cell s = detail::trap_to_grid(trap.mouth, trap.axis, -back, 0);
        const int depth = params.trap_length + beyond;
        const Cell g = detail::trap_to_grid(trap.mouth, trap.axis, depth, lateral);
        ep = make_episode(i, s, g);
      } else {
        const Cell s = free_cells[static_cast<std::size_t>(rng.below(static_cast<int>(free_cells.size())))];
        const Cell g = free_cells[static_cast<std::size_t>(rng.below(static_cast<int>(free_cells.size())))];
        ep = make_episode(i, s, g);
      }
    }
    if (!ep) throw GenerationError("could not place episode " + std::to_string(i), params.seed);
    episodes.push_back(std::move(*ep));
  }
  return {std::move(grid), std::move(episodes), std::move(traps)};
}

/// Parallel straight corridors, one episode per corridor running its full length.
/// Corridors are `corridor_width` cells wide and separated by one-cell walls.
inline GeneratedScene generate_corridor_suite(int count, int length_cells, int corridor_width,
                                              double resolution, std::uint64_t seed,
                                              int turn_increment = 30) {
  if (count < 1 || length_cells < 2 || corridor_width < 1) throw ConfigError("invalid corridor suite dimensions");
  SceneRng rng(seed);
  const std::string scene_id = "corridors-" + std::to_string(seed);
  OccupancyGrid grid(scene_id, length_cells, count * (corridor_width + 1) - 1, resolution);
  for (int k = 1; k < count; ++k)
    for (int x = 0; x < length_cells; ++x) grid.set_blocked({x, k * (corridor_width + 1) - 1}, true);

  std::vector<Episode> episodes;
  for (int k = 0; k < count; ++k) {
    const int lane = k * (corridor_width + 1) + corridor_width / 2;
    const bool eastward = rng.below(2) == 0;
    const Cell s{eastward ? 0 : length_cells - 1, lane};
    const Cell g{eastward ? length_cells - 1 : 0, lane};
    Episode ep;
    char id[32];
    std::snprintf(id, sizeof id, "corridor-%03d", k);
    ep.id = id;
    ep.scene_id = scene_id;
    const Point2 sp = grid.cell_center(s);
    ep.start = {sp.x, sp.y, rng.below(360 / turn_increment) * turn_increment};
    ep.goal = grid.cell_center(g);
    ep.reference_path = plan_reference_path(grid, sp, ep.goal);
    episodes.push_back(std::move(ep));
  }
  return {std::move(grid), std::move(episodes), {}};
}

}  // namespace vlnce

#endif  // VLNCE_SCENEGEN_HPP
