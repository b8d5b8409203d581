#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include <gtest/gtest.h>

#include "test_maps.hpp"
#include "vlnce/world.hpp"

namespace vlnce {
namespace {

using testing::grid_from;
using testing::open_grid;

SimConfig no_slide() {
  SimConfig c;
  c.sliding_allowed = false;
  return c;
}

SimConfig slide() {
  SimConfig c;
  c.sliding_allowed = true;
  return c;
}

TEST(OccupancyGrid, OutsideIsObstacle) {
  const auto g = open_grid(4, 3, 0.5);
  EXPECT_TRUE(g.navigable({0.0, 0.0}));
  EXPECT_TRUE(g.navigable({1.99, 1.49}));
  EXPECT_FALSE(g.navigable({2.0, 1.0}));
  EXPECT_FALSE(g.navigable({1.0, 1.5}));
  EXPECT_FALSE(g.navigable({-0.01, 1.0}));
}

TEST(OccupancyGrid, RejectsBadDimensions) {
  EXPECT_THROW(OccupancyGrid("x", 0, 3, 0.1), ConfigError);
  EXPECT_THROW(OccupancyGrid("x", 3, 3, 0.0), ConfigError);
  const std::vector<std::string> ragged{"...", ".."};
  EXPECT_THROW(OccupancyGrid::from_rows("x", 0.1, ragged), ConfigError);
}

TEST(StepAction, ForwardInOpenSpace) {
  const auto g = open_grid(20, 20, 0.25);
  const auto r = step_action(g, {1.0, 1.0, 0}, LowLevelAction::Forward, no_slide());
  EXPECT_FALSE(r.collided);
  EXPECT_EQ(r.pose, (Pose{1.25, 1.0, 0}));
}

TEST(StepAction, NoSlidingBlockedForwardLeavesPoseUnchanged) {
  // Wall column starts at x = 1.0; the agent is 0.1 m in front of it.
  const auto g = grid_from({"....#", "....#", "....#"}, 0.25);
  const Pose p{0.9, 0.4, 0};
  const auto r = step_action(g, p, LowLevelAction::Forward, no_slide());
  EXPECT_TRUE(r.collided);
  EXPECT_EQ(r.pose, p);
}

TEST(StepAction, SlidingKeepsOnlyTheUnblockedAxis) {
  // 3x3 map at 1 m with a wall column at x in [2, 3).
  const auto g = grid_from({"..#", "..#", "..#"}, 1.0);
  const Pose p{1.9, 1.5, 30};
  const auto r = step_action(g, p, LowLevelAction::Forward, slide());

  // Independent per-axis oracle: an axis move is allowed iff the cell at its endpoint and every
  // cell boundary crossed on the way is free. Moves here are shorter than one cell, so the
  // endpoint cell decides.
  const double dx = 0.25 * std::cos(std::numbers::pi / 6);
  const double dy = 0.25 * std::sin(std::numbers::pi / 6);
  const bool x_ok = static_cast<int>(std::floor(p.x + dx)) < 2;
  const bool y_ok = static_cast<int>(std::floor(p.y + dy)) < 3;
  ASSERT_FALSE(x_ok);
  ASSERT_TRUE(y_ok);
  EXPECT_TRUE(r.collided);
  EXPECT_DOUBLE_EQ(r.pose.x, 1.9);
  EXPECT_NEAR(r.pose.y, 1.5 + dy, 1e-12);
  EXPECT_EQ(r.pose.heading, 30);
}

TEST(StepAction, TurnsNeverCollideAndTwelveLeftsComeBack) {
  const auto g = grid_from({"###", "#.#", "###"}, 1.0);
  Pose p{1.5, 1.5, 90};
  for (int i = 0; i < 12; ++i) {
    const auto r = step_action(g, p, LowLevelAction::TurnLeft, no_slide());
    EXPECT_FALSE(r.collided);
    EXPECT_EQ(r.pose.x, p.x);
    EXPECT_EQ(r.pose.y, p.y);
    p = r.pose;
  }
  EXPECT_EQ(p.heading, 90);
  EXPECT_EQ(step_action(g, p, LowLevelAction::TurnRight, no_slide()).pose.heading, 60);
  EXPECT_EQ(step_action(g, p, LowLevelAction::Stop, no_slide()).pose, p);
}

TEST(StepAction, InvalidStateErrors) {
  const auto g = grid_from({"..#"}, 1.0);
  EXPECT_THROW(step_action(g, {2.5, 0.5, 0}, LowLevelAction::Forward, no_slide()), InvalidStateError);
  EXPECT_THROW(step_action(g, {5.0, 0.5, 0}, LowLevelAction::TurnLeft, no_slide()), InvalidStateError);
}

TEST(StepAction, PropertyNoSlidingAllOrNothing) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto g = testing::random_grid(rng, 12, 12, 0.25, 0.3);
    const Point2 p = testing::random_free_point(rng, g);
    if (p.x < 0) continue;
    const Pose pose{p.x, p.y, static_cast<int>(rng() % 12) * 30};
    const auto r = step_action(g, pose, LowLevelAction::Forward, no_slide());
    const double d = distance(p, r.pose.position());
    if (r.collided) {
      EXPECT_EQ(r.pose, pose);
    } else {
      EXPECT_NEAR(d, 0.25, 1e-12);
      EXPECT_TRUE(g.navigable(r.pose.position()));
    }
  }
}

TEST(StepAction, PropertySlidingBoundedAndNavigable) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto g = testing::random_grid(rng, 12, 12, 0.25, 0.35);
    const Point2 p = testing::random_free_point(rng, g);
    if (p.x < 0) continue;
    const Pose pose{p.x, p.y, static_cast<int>(rng() % 12) * 30};
    const auto r = step_action(g, pose, LowLevelAction::Forward, slide());
    EXPECT_LE(distance(p, r.pose.position()), 0.25 + 1e-12);
    EXPECT_TRUE(g.navigable(r.pose.position()));
  }
}

// Brute-force oracle: walk cells along +x from the origin's cell to the first obstacle.
double cell_walk_depth_east(const OccupancyGrid& g, Point2 origin) {
  Cell c = *g.cell_of(origin);
  while (g.free(c)) ++c.x;
  return c.x * g.resolution() - origin.x;
}

TEST(Raycast, EmptyGridClampsToMaxRange) {
  const auto g = open_grid(100, 100, 0.1);
  SimConfig cfg;
  cfg.raycast_max_range = 5.0;
  for (int h = 0; h < 360; h += 30) EXPECT_DOUBLE_EQ(raycast(g, {5.0, 5.0, 0}, h, cfg), 5.0);
}

TEST(Raycast, WallDistanceMatchesCellWalk) {
  OccupancyGrid g("wall", 50, 5, 0.1);
  for (int y = 0; y < 5; ++y) g.set_blocked({26, y}, true);
  const Point2 o{0.5, 0.25};
  const double oracle = cell_walk_depth_east(g, o);
  EXPECT_NEAR(oracle, 2.1, 1e-12);
  EXPECT_NEAR(raycast(g, {o.x, o.y, 0}, 0, SimConfig{}), oracle, 0.05);
}

TEST(Raycast, AdjacentObstacleGivesSubCellDepth) {
  const auto g = grid_from({".#"}, 0.1);
  EXPECT_LT(raycast(g, {0.05, 0.05, 0}, 0, SimConfig{}), 0.1);
  EXPECT_THROW(raycast(g, {0.15, 0.05, 0}, 0, SimConfig{}), InvalidStateError);
}

TEST(Raycast, PropertyMonotoneInWallDistance) {
  SimConfig cfg;
  cfg.raycast_max_range = 10.0;
  double last = 0.0;
  for (int wall = 3; wall < 60; ++wall) {
    OccupancyGrid g("w", 64, 3, 0.1);
    for (int y = 0; y < 3; ++y) g.set_blocked({wall, y}, true);
    const double d = raycast(g, {0.15, 0.15, 0}, 0, cfg);
    EXPECT_GE(d, last);
    last = d;
  }
}

// Independent Bellman-Ford over the same move rules (8-connected, no corner cutting).
std::vector<double> bellman_ford(const OccupancyGrid& g, Cell src) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(g.cell_count(), inf);
  d[g.index(src)] = 0.0;
  for (bool changed = true; changed;) {
    changed = false;
    for (int y = 0; y < g.height(); ++y)
      for (int x = 0; x < g.width(); ++x) {
        if (g.blocked({x, y}) || d[g.index({x, y})] == inf) continue;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (!dx && !dy) continue;
            const Cell n{x + dx, y + dy};
            if (g.blocked(n)) continue;
            if (dx && dy && (g.blocked({x + dx, y}) || g.blocked({x, y + dy}))) continue;
            const double w = (dx && dy) ? std::sqrt(2.0) : 1.0;
            const double cand = d[g.index({x, y})] + w * g.resolution();
            if (cand < d[g.index(n)] - 1e-12) {
              d[g.index(n)] = cand;
              changed = true;
            }
          }
      }
  }
  return d;
}

TEST(Geodesic, SameCellIsZero) {
  const auto g = open_grid(5, 5, 0.1);
  EXPECT_EQ(geodesic_distance(g, {0.21, 0.22}, {0.29, 0.28}), 0.0);
}

TEST(Geodesic, StraightCorridor) {
  const auto g = open_grid(10, 1, 0.1);
  const auto d = geodesic_distance(g, {0.05, 0.05}, {0.95, 0.05});
  ASSERT_TRUE(d);
  EXPECT_NEAR(*d, 0.9, 1e-12);
  EXPECT_NEAR(*d, bellman_ford(g, {0, 0})[g.index({9, 0})], 1e-12);
}

TEST(Geodesic, WalledPocketIsUnreachable) {
  const auto g = grid_from({".....", "..###", "..#.#", "..###"}, 1.0);
  EXPECT_FALSE(geodesic_distance(g, {0.5, 0.5}, {3.5, 2.5}).has_value());
  EXPECT_THROW(geodesic_distance(g, {0.5, 0.5}, {2.5, 2.5}), InvalidStateError);
}

TEST(Geodesic, NoCornerCutting) {
  // Free cells touch only at a corner: no path.
  const auto g = grid_from({".#", "#."}, 1.0);
  EXPECT_FALSE(geodesic_distance(g, {0.5, 0.5}, {1.5, 1.5}).has_value());
}

TEST(Geodesic, PropertyMatchesBellmanFordSymmetricAndTriangle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = testing::random_grid(rng, 14, 11, 0.2, 0.25);
    const Point2 a = testing::random_free_point(rng, g);
    const Point2 b = testing::random_free_point(rng, g);
    const Point2 c = testing::random_free_point(rng, g);
    if (a.x < 0 || b.x < 0 || c.x < 0) continue;
    const auto oracle = bellman_ford(g, *g.cell_of(a));
    const auto ab = geodesic_distance(g, a, b);
    const double expect = oracle[g.index(*g.cell_of(b))];
    if (std::isinf(expect)) {
      EXPECT_FALSE(ab.has_value());
      continue;
    }
    ASSERT_TRUE(ab);
    EXPECT_NEAR(*ab, expect, 1e-9);
    const auto ba = geodesic_distance(g, b, a);
    ASSERT_TRUE(ba);
    EXPECT_EQ(*ab, *ba);
    const auto ac = geodesic_distance(g, a, c);
    const auto cb = geodesic_distance(g, c, b);
    if (ac && cb) EXPECT_LE(*ab, *ac + *cb + 1e-9);
  }
}

TEST(Geodesic, AxisAlignedOpenGridTracksEuclidean) {
  const auto g = open_grid(40, 40, 0.25);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const Point2 a{u(rng), 5.1};
    const Point2 b{u(rng), 5.1};
    EXPECT_NEAR(*geodesic_distance(g, a, b), distance(a, b), 0.25 + 1e-9);
  }
}

}  // namespace
}  // namespace vlnce
