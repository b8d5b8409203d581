#ifndef VLNCE_WORLD_HPP
#define VLNCE_WORLD_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vlnce/config.hpp"
#include "vlnce/errors.hpp"
#include "vlnce/geometry.hpp"

namespace vlnce {

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Row-major occupancy grid. Cell (cx, cy) covers [cx*res, (cx+1)*res) x [cy*res, (cy+1)*res).
/// Everything outside the grid counts as obstacle.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;

  OccupancyGrid(std::string id, int width, int height, double resolution)
      : id_(std::move(id)), width_(width), height_(height), resolution_(resolution) {
    if (width < 1 || height < 1) throw ConfigError("grid dimensions must be at least 1x1");
    if (!(resolution > 0.0)) throw ConfigError("grid resolution must be positive");
    blocked_.assign(static_cast<std::size_t>(width) * height, 0);
  }

  /// Builds a grid from text rows, '.' navigable and '#' obstacle. rows[i] is cell row y = i.
  static OccupancyGrid from_rows(std::string id, double resolution, std::span<const std::string> rows) {
    if (rows.empty()) throw ConfigError("grid needs at least one row");
    const int w = static_cast<int>(rows.front().size());
    OccupancyGrid g(std::move(id), w, static_cast<int>(rows.size()), resolution);
    for (int y = 0; y < g.height_; ++y) {
      const std::string& row = rows[static_cast<std::size_t>(y)];
      if (static_cast<int>(row.size()) != w) throw ConfigError("grid rows must have equal length");
      for (int x = 0; x < w; ++x) {
        if (row[x] == '#') {
          g.set_blocked({x, y}, true);
        } else if (row[x] != '.') {
          throw ConfigError(std::string("unexpected grid character '") + row[x] + "'");
        }
      }
    }
    return g;
  }

  std::vector<std::string> to_rows() const {
    std::vector<std::string> rows(static_cast<std::size_t>(height_), std::string(width_, '.'));
    for (int y = 0; y < height_; ++y)
      for (int x = 0; x < width_; ++x)
        if (blocked({x, y})) rows[y][x] = '#';
    return rows;
  }

  const std::string& id() const { return id_; }
  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  double width_m() const { return width_ * resolution_; }
  double height_m() const { return height_ * resolution_; }
  std::size_t cell_count() const { return blocked_.size(); }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  bool blocked(Cell c) const { return !in_bounds(c) || blocked_[index(c)] != 0; }
  bool free(Cell c) const { return !blocked(c); }
  void set_blocked(Cell c, bool value) {
    if (in_bounds(c)) blocked_[index(c)] = value ? 1 : 0;
  }

  std::optional<Cell> cell_of(Point2 p) const {
    if (!(p.x >= 0.0) || !(p.y >= 0.0)) return std::nullopt;
    const double fx = std::floor(p.x / resolution_);
    const double fy = std::floor(p.y / resolution_);
    if (fx >= width_ || fy >= height_) return std::nullopt;
    return Cell{static_cast<int>(fx), static_cast<int>(fy)};
  }

  bool navigable(Point2 p) const {
    const auto c = cell_of(p);
    return c && free(*c);
  }

  Point2 cell_center(Cell c) const { return {(c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_}; }

  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }
  Cell cell_at_index(std::size_t i) const {
    return {static_cast<int>(i % width_), static_cast<int>(i / width_)};
  }

  std::size_t obstacle_count() const {
    return static_cast<std::size_t>(std::count(blocked_.begin(), blocked_.end(), std::uint8_t{1}));
  }

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  std::string id_;
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  std::vector<std::uint8_t> blocked_;
};

enum class LowLevelAction { Forward, TurnLeft, TurnRight, Stop };

inline const char* to_string(LowLevelAction a) {
  switch (a) {
    case LowLevelAction::Forward: return "forward";
    case LowLevelAction::TurnLeft: return "turn_left";
    case LowLevelAction::TurnRight: return "turn_right";
    case LowLevelAction::Stop: return "stop";
  }
  return "?";
}

inline void require_navigable(const OccupancyGrid& grid, Point2 p, const char* what) {
  if (!grid.cell_of(p)) throw InvalidStateError(std::string(what) + " lies outside the grid");
  if (!grid.navigable(p)) throw InvalidStateError(std::string(what) + " lies inside an obstacle");
}

/// True when every sample along (a, b] is navigable. Samples are spaced at most resolution/2 apart.
inline bool segment_clear(const OccupancyGrid& grid, Point2 a, Point2 b) {
  const double len = distance(a, b);
  if (len == 0.0) return grid.navigable(b);
  const double spacing = grid.resolution() / 2.0;
  const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
  for (int i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    if (!grid.navigable(a + t * (b - a))) return false;
  }
  return true;
}

struct StepResult {
  Pose pose;
  bool collided = false;
};

/// Applies one low-level action. Turns never collide. A blocked Forward either leaves the agent
/// in place (no sliding) or applies each unblocked axis component of the motion (sliding).
inline StepResult step_action(const OccupancyGrid& grid, const Pose& pose, LowLevelAction action,
                              const SimConfig& cfg) {
  require_navigable(grid, pose.position(), "pose");
  switch (action) {
    case LowLevelAction::Stop:
      return {pose, false};
    case LowLevelAction::TurnLeft:
      return {{pose.x, pose.y, wrap_degrees(pose.heading + cfg.turn_increment)}, false};
    case LowLevelAction::TurnRight:
      return {{pose.x, pose.y, wrap_degrees(pose.heading - cfg.turn_increment)}, false};
    case LowLevelAction::Forward:
      break;
  }

  const Point2 from = pose.position();
  const Point2 delta = cfg.forward_step * heading_vector(pose.heading);
  const Point2 to = from + delta;
  if (segment_clear(grid, from, to)) return {{to.x, to.y, pose.heading}, false};
  if (!cfg.sliding_allowed) return {pose, true};

  Point2 at = from;
  if (delta.x != 0.0) {
    const Point2 next{at.x + delta.x, at.y};
    if (segment_clear(grid, at, next)) at = next;
  }
  if (delta.y != 0.0) {
    const Point2 next{at.x, at.y + delta.y};
    if (segment_clear(grid, at, next)) at = next;
  }
  return {{at.x, at.y, pose.heading}, true};
}

/// Depth along a ray: distance to the first non-navigable point, clamped to cfg.raycast_max_range.
/// The march uses resolution/2 steps, then bisects the last interval down to ~1e-9 m.
inline double raycast(const OccupancyGrid& grid, const Pose& origin, double ray_heading,
                      const SimConfig& cfg) {
  require_navigable(grid, origin.position(), "ray origin");
  const Point2 o = origin.position();
  const Point2 dir = heading_vector(ray_heading);
  const double step = grid.resolution() / 2.0;
  const double range = cfg.raycast_max_range;

  double prev = 0.0;
  for (int k = 1;; ++k) {
    const double t = std::min(k * step, range);
    if (!grid.navigable(o + t * dir)) {
      double lo = prev;
      double hi = t;
      while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (grid.navigable(o + mid * dir)) lo = mid; else hi = mid;
      }
      return std::min(hi, range);
    }
    if (t >= range) return range;
    prev = t;
  }
}

/// Shortest 8-connected paths over free cells. Diagonal moves need both flanking cells free,
/// so paths never squeeze between two obstacles that touch at a corner.
class DistanceField {
 public:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  DistanceField(const OccupancyGrid& grid, Cell source, std::optional<Cell> target = std::nullopt)
      : grid_(&grid), source_(source) {
    const std::size_t n = grid.cell_count();
    straight_.assign(n, -1);
    diagonal_.assign(n, -1);
    parent_.assign(n, kNone);
    if (grid.blocked(source)) return;

    using Entry = std::pair<double, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    std::vector<std::uint8_t> done(n, 0);
    const std::size_t src = grid.index(source);
    straight_[src] = 0;
    diagonal_[src] = 0;
    open.push({0.0, src});

    static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    while (!open.empty()) {
      const auto [d, u] = open.top();
      open.pop();
      if (done[u]) continue;
      done[u] = 1;
      const Cell cu = grid.cell_at_index(u);
      if (target && cu == *target) break;
      for (int k = 0; k < 8; ++k) {
        const Cell cv{cu.x + kDx[k], cu.y + kDy[k]};
        if (grid.blocked(cv)) continue;
        const bool diag = k >= 4;
        if (diag && (grid.blocked({cu.x + kDx[k], cu.y}) || grid.blocked({cu.x, cu.y + kDy[k]})))
          continue;
        const std::size_t v = grid.index(cv);
        if (done[v]) continue;
        const int s = straight_[u] + (diag ? 0 : 1);
        const int g = diagonal_[u] + (diag ? 1 : 0);
        const double cost = units(s, g);
        if (straight_[v] < 0 || cost < units(straight_[v], diagonal_[v])) {
          straight_[v] = s;
          diagonal_[v] = g;
          parent_[v] = u;
          open.push({cost, v});
        }
      }
    }
  }

  bool reachable(Cell c) const { return grid_->in_bounds(c) && straight_[grid_->index(c)] >= 0; }

  /// Path length in meters; the value depends only on the move counts, so it is order independent.
  std::optional<double> meters(Cell c) const {
    if (!reachable(c)) return std::nullopt;
    const std::size_t i = grid_->index(c);
    return units(straight_[i], diagonal_[i]) * grid_->resolution();
  }

  /// Cells from the source to `c` inclusive; empty if unreachable.
  std::vector<Cell> path_to(Cell c) const {
    std::vector<Cell> out;
    if (!reachable(c)) return out;
    for (std::size_t i = grid_->index(c); i != kNone; i = parent_[i]) out.push_back(grid_->cell_at_index(i));
    std::reverse(out.begin(), out.end());
    return out;
  }

  Cell source() const { return source_; }

 private:
  static double units(int straight, int diagonal) {
    return static_cast<double>(straight) + static_cast<double>(diagonal) * std::numbers::sqrt2;
  }

  const OccupancyGrid* grid_;
  Cell source_;
  std::vector<int> straight_;
  std::vector<int> diagonal_;
  std::vector<std::size_t> parent_;
};

/// Obstacle-aware distance between the cells containing a and b; nullopt when disconnected.
inline std::optional<double> geodesic_distance(const OccupancyGrid& grid, Point2 a, Point2 b) {
  require_navigable(grid, a, "geodesic endpoint a");
  require_navigable(grid, b, "geodesic endpoint b");
  const Cell ca = *grid.cell_of(a);
  const Cell cb = *grid.cell_of(b);
  if (ca == cb) return 0.0;
  return DistanceField(grid, ca, cb).meters(cb);
}

}  // namespace vlnce

#endif  // VLNCE_WORLD_HPP
