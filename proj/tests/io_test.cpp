#include <gtest/gtest.h>

#include "vlnce/io.hpp"

namespace vlnce {
namespace {

GeneratedScene small_scene() {
  GenParams p;
  p.seed = 17;
  p.width = 32;
  p.height = 32;
  p.episode_count = 3;
  p.trap_count = 2;
  p.min_geodesic = 4.0;
  return generate_scene(p);
}

TEST(SceneIo, RoundTripIsByteIdentical) {
  const auto s = small_scene();
  const std::string text = io::serialize_scene(s.grid);
  const auto back = io::parse_scene(text);
  EXPECT_EQ(back, s.grid);
  EXPECT_EQ(io::serialize_scene(back), text);
}

TEST(EpisodeIo, RoundTripIsByteIdentical) {
  auto s = small_scene();
  s.episodes[0].instruction = "walk past the sofa";
  s.episodes[0].language = "en";
  const std::string text = io::serialize_episodes(s.episodes);
  const auto back = io::parse_episodes(text, s.grid);
  EXPECT_EQ(back, s.episodes);
  EXPECT_EQ(io::serialize_episodes(back), text);
}

TEST(SceneIo, TruncatedInputReportsOffset) {
  const std::string text = io::serialize_scene(small_scene().grid);
  const std::string cut = text.substr(0, text.size() / 2);
  try {
    io::parse_scene(cut);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GT(e.offset(), 0u);
    EXPECT_LE(e.offset(), cut.size() + 1);
  }
}

TEST(SceneIo, UnknownSchemaVersion) {
  auto j = io::scene_to_json(small_scene().grid);
  j["schema_version"] = 2;
  EXPECT_THROW(io::scene_from_json(j), VersionError);
  j.erase("schema_version");
  EXPECT_THROW(io::scene_from_json(j), VersionError);
}

TEST(SceneIo, MismatchedRowsRejected) {
  auto j = io::scene_to_json(small_scene().grid);
  j["height"] = 31;
  EXPECT_THROW(io::scene_from_json(j), ValidationError);
}

TEST(EpisodeIo, GoalInObstacleNamesEpisode) {
  auto s = small_scene();
  Cell blocked{-1, -1};
  for (int i = 0; i < s.grid.width() * s.grid.height() && blocked.x < 0; ++i)
    if (s.grid.blocked(s.grid.cell_at_index(i))) blocked = s.grid.cell_at_index(i);
  ASSERT_GE(blocked.x, 0);
  s.episodes[1].goal = s.grid.cell_center(blocked);
  const std::string text = io::serialize_episodes(s.episodes);
  try {
    io::parse_episodes(text, s.grid);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.id(), s.episodes[1].id);
    EXPECT_NE(std::string(e.what()).find(s.episodes[1].id), std::string::npos);
  }
}

TEST(LogIo, RoundTrip) {
  const auto s = small_scene();
  RunConfig cfg;
  cfg.sim.max_steps = 120;
  const auto run = run_suite(s.grid, s.episodes, cfg);
  const std::string text = io::serialize_logs(run, cfg);
  const auto logs = io::parse_logs(text);
  ASSERT_EQ(logs.size(), run.episodes.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    EXPECT_EQ(logs[i].episode_id, run.episodes[i].episode_id);
    EXPECT_EQ(logs[i].end, run.episodes[i].end);
    EXPECT_EQ(logs[i].log, run.episodes[i].log);
    // Re-evaluating a stored log reproduces the live metrics.
    const auto m = evaluate_episode(s.episodes[i], logs[i].log, s.grid, cfg.sim);
    EXPECT_EQ(m.spl, run.episodes[i].metrics.spl);
    EXPECT_EQ(m.ndtw, run.episodes[i].metrics.ndtw);
  }
  const auto back = io::sim_config_from_logs(io::parse_json(text));
  EXPECT_EQ(back.max_steps, 120);
  EXPECT_EQ(back.forward_step, cfg.sim.forward_step);
}

}  // namespace
}  // namespace vlnce
