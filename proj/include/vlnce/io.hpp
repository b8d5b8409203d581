#ifndef VLNCE_IO_HPP
#define VLNCE_IO_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vlnce/errors.hpp"
#include "vlnce/harness.hpp"
#include "vlnce/scenegen.hpp"
#include "vlnce/trajectory.hpp"
#include "vlnce/world.hpp"

namespace vlnce::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what(), e.byte);
  }
}

inline std::string dump(const Json& j) { return j.dump(2) + '\n'; }

inline void check_version(const Json& j) {
  if (!j.is_object() || !j.contains("schema_version")) throw VersionError("missing schema_version");
  const Json& v = j.at("schema_version");
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
    throw VersionError("unsupported schema_version " + v.dump() + " (expected " + std::to_string(kSchemaVersion) + ")");
}

// Field access that turns nlohmann type errors into ValidationError with context.
template <typename T>
T field(const Json& j, const char* key, const std::string& ctx) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what(), ctx);
  }
}

// ---- scene ----

inline Json scene_to_json(const OccupancyGrid& grid) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["id"] = grid.id();
  j["width"] = grid.width();
  j["height"] = grid.height();
  j["resolution"] = grid.resolution();
  j["rows"] = grid.to_rows();
  return j;
}

inline OccupancyGrid scene_from_json(const Json& j) {
  check_version(j);
  const auto id = field<std::string>(j, "id", "scene");
  const auto width = field<int>(j, "width", id);
  const auto height = field<int>(j, "height", id);
  const auto res = field<double>(j, "resolution", id);
  const auto rows = field<std::vector<std::string>>(j, "rows", id);
  if (width < 1 || height < 1) throw ValidationError("width and height must be at least 1", id);
  if (!(res > 0.0)) throw ValidationError("resolution must be positive", id);
  if (static_cast<int>(rows.size()) != height) throw ValidationError("row count does not match height", id);
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != width) throw ValidationError("row length does not match width", id);
  try {
    return OccupancyGrid::from_rows(id, res, rows);
  } catch (const ConfigError& e) {
    throw ValidationError(e.what(), id);
  }
}

inline std::string serialize_scene(const OccupancyGrid& grid) { return dump(scene_to_json(grid)); }
inline OccupancyGrid parse_scene(const std::string& text) { return scene_from_json(parse_json(text)); }

// ---- episodes ----

inline Json episode_to_json(const Episode& ep) {
  Json j;
  j["id"] = ep.id;
  j["scene_id"] = ep.scene_id;
  j["start"] = {{"x", ep.start.x}, {"y", ep.start.y}, {"heading", ep.start.heading}};
  j["goal"] = {{"x", ep.goal.x}, {"y", ep.goal.y}};
  Json path = Json::array();
  for (const auto& p : ep.reference_path) path.push_back({p.x, p.y});
  j["reference_path"] = std::move(path);
  if (ep.instruction) j["instruction"] = *ep.instruction;
  if (ep.language) j["language"] = *ep.language;
  return j;
}

inline Episode episode_from_json(const Json& j) {
  Episode ep;
  ep.id = field<std::string>(j, "id", "episode");
  ep.scene_id = field<std::string>(j, "scene_id", ep.id);
  const Json start = field<Json>(j, "start", ep.id);
  ep.start = {field<double>(start, "x", ep.id), field<double>(start, "y", ep.id), field<int>(start, "heading", ep.id)};
  const Json goal = field<Json>(j, "goal", ep.id);
  ep.goal = {field<double>(goal, "x", ep.id), field<double>(goal, "y", ep.id)};
  for (const auto& p : field<std::vector<std::vector<double>>>(j, "reference_path", ep.id)) {
    if (p.size() != 2) throw ValidationError("reference_path entries must be [x, y]", ep.id);
    ep.reference_path.push_back({p[0], p[1]});
  }
  if (j.contains("instruction")) ep.instruction = field<std::string>(j, "instruction", ep.id);
  if (j.contains("language")) ep.language = field<std::string>(j, "language", ep.id);
  return ep;
}

/// Episode files wrap the episode array with a schema version.
inline std::string serialize_episodes(const std::vector<Episode>& episodes) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json arr = Json::array();
  for (const auto& ep : episodes) arr.push_back(episode_to_json(ep));
  j["episodes"] = std::move(arr);
  return dump(j);
}

inline std::vector<Episode> parse_episodes(const std::string& text) {
  const Json j = parse_json(text);
  check_version(j);
  const Json& arr = j.contains("episodes") ? j.at("episodes") : Json();
  if (!arr.is_array()) throw ValidationError("'episodes' must be an array");
  std::vector<Episode> out;
  for (const auto& e : arr) out.push_back(episode_from_json(e));
  return out;
}

/// Parses episodes and checks every one against the scene.
inline std::vector<Episode> parse_episodes(const std::string& text, const OccupancyGrid& grid) {
  auto eps = parse_episodes(text);
  for (const auto& ep : eps) validate_episode(grid, ep);
  return eps;
}

// ---- trajectory logs ----

inline Json log_to_json(const EpisodeResult& r) {
  Json j;
  j["episode_id"] = r.episode_id;
  j["terminated_by"] = to_string(r.end);
  j["start"] = {{"x", r.log.start.x}, {"y", r.log.start.y}, {"heading", r.log.start.heading}};
  Json steps = Json::array();
  for (const auto& s : r.log.steps)
    steps.push_back({s.pose.x, s.pose.y, s.pose.heading, to_string(s.action), to_string(s.kind), s.collided});
  j["steps"] = std::move(steps);
  return j;
}

inline LowLevelAction action_from_string(const std::string& s) {
  for (const auto a : {LowLevelAction::Forward, LowLevelAction::TurnLeft, LowLevelAction::TurnRight, LowLevelAction::Stop})
    if (s == to_string(a)) return a;
  throw ValidationError("unknown action '" + s + "'");
}

struct StoredLog {
  std::string episode_id;
  EpisodeEnd end = EpisodeEnd::Stopped;
  TrajectoryLog log;
};

inline StoredLog log_from_json(const Json& j) {
  StoredLog out;
  out.episode_id = field<std::string>(j, "episode_id", "log");
  out.end = episode_end_from_string(field<std::string>(j, "terminated_by", out.episode_id));
  const Json start = field<Json>(j, "start", out.episode_id);
  out.log.start = {field<double>(start, "x", out.episode_id), field<double>(start, "y", out.episode_id),
                   field<int>(start, "heading", out.episode_id)};
  for (const auto& s : field<Json>(j, "steps", out.episode_id)) {
    if (!s.is_array() || s.size() != 6) throw ValidationError("malformed step entry", out.episode_id);
    try {
      out.log.steps.push_back({{s[0].get<double>(), s[1].get<double>(), s[2].get<int>()},
                               action_from_string(s[3].get<std::string>()),
                               charge_kind_from_string(s[4].get<std::string>()),
                               s[5].get<bool>()});
    } catch (const Json::exception& e) {
      throw ValidationError(std::string("malformed step entry: ") + e.what(), out.episode_id);
    }
  }
  return out;
}

inline Json run_config_to_json(const RunConfig& cfg) {
  Json j;
  j["planner"] = cfg.planner;
  j["seed"] = cfg.seed;
  j["sliding"] = cfg.sim.sliding_allowed;
  j["tryout"] = cfg.tryout.enabled;
  j["tryout_directions"] = cfg.tryout.directions;
  j["reaim"] = cfg.tryout.reaim;
  j["max_steps"] = cfg.sim.max_steps;
  j["forward_step"] = cfg.sim.forward_step;
  j["turn_increment"] = cfg.sim.turn_increment;
  j["success_threshold"] = cfg.sim.success_threshold;
  j["dtw_threshold"] = cfg.sim.dtw_threshold;
  j["raycast_max_range"] = cfg.sim.raycast_max_range;
  j["deadlock_epsilon"] = cfg.sim.deadlock_epsilon;
  return j;
}

inline std::string serialize_logs(const RunResult& run, const RunConfig& cfg) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = run_config_to_json(cfg);
  Json logs = Json::array();
  for (const auto& r : run.episodes) logs.push_back(log_to_json(r));
  j["logs"] = std::move(logs);
  return dump(j);
}

/// Simulation settings echoed in a log file, so stored runs are scored the way they were run.
inline SimConfig sim_config_from_logs(const Json& j) {
  SimConfig cfg;
  if (!j.contains("config")) return cfg;
  const Json& c = j.at("config");
  cfg.sliding_allowed = field<bool>(c, "sliding", "config");
  cfg.max_steps = field<int>(c, "max_steps", "config");
  cfg.forward_step = field<double>(c, "forward_step", "config");
  cfg.turn_increment = field<int>(c, "turn_increment", "config");
  cfg.success_threshold = field<double>(c, "success_threshold", "config");
  cfg.dtw_threshold = field<double>(c, "dtw_threshold", "config");
  cfg.raycast_max_range = field<double>(c, "raycast_max_range", "config");
  cfg.deadlock_epsilon = field<double>(c, "deadlock_epsilon", "config");
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ValidationError(e.what(), "config");
  }
  return cfg;
}

inline std::vector<StoredLog> parse_logs(const std::string& text) {
  const Json j = parse_json(text);
  check_version(j);
  const Json& arr = j.contains("logs") ? j.at("logs") : Json();
  if (!arr.is_array()) throw ValidationError("'logs' must be an array");
  std::vector<StoredLog> out;
  for (const auto& e : arr) out.push_back(log_from_json(e));
  return out;
}

}  // namespace vlnce::io

#endif  // VLNCE_IO_HPP
