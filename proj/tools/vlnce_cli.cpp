// Command-line front end: gen, run, ablate, eval, plot.
//
// Exit codes: 0 success, 1 usage error, 2 validation error, 3 runtime failure.

#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vlnce/io.hpp"
#include "vlnce/vlnce.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

struct RunFlags {
  std::string scene;
  std::string episodes;
  std::string planner = "greedy";
  std::string sliding = "off";
  std::string tryout = "on";
  int max_steps = 500;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::vector<int> directions{30, -30, 60, -60, 90, -90};
  double deadlock_epsilon = 1e-6;
  bool replay = false;
  std::string out;
  std::string logs;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_modes) {
  cmd->add_option("--scene", f.scene, "Scene JSON file")->required();
  cmd->add_option("--episodes", f.episodes, "Episode JSON file")->required();
  cmd->add_option("--planner", f.planner, "oracle | greedy | random | ensemble:<name,...>");
  if (with_modes) {
    cmd->add_option("--sliding", f.sliding, "Slide along obstacles on collision")->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--tryout", f.tryout, "Tryout controller")->check(CLI::IsMember({"on", "off"}));
  }
  cmd->add_option("--max-steps", f.max_steps, "Action budget per episode")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Seed for stochastic planners");
  cmd->add_option("--jobs", f.jobs, "Episodes run in parallel")->check(CLI::PositiveNumber);
  cmd->add_option("--tryout-directions", f.directions, "Escape headings in degrees, tried in order")->delimiter(',');
  cmd->add_option("--deadlock-epsilon", f.deadlock_epsilon, "Displacement below which a forward is a deadlock");
  cmd->add_flag("--replay", f.replay, "After an escape replay the remaining actions instead of re-aiming");
  cmd->add_option("--out", f.out, "CSV output path (stdout if omitted)");
}

vlnce::RunConfig make_run_config(const RunFlags& f) {
  vlnce::RunConfig cfg;
  cfg.planner = f.planner;
  cfg.seed = f.seed;
  cfg.jobs = f.jobs;
  cfg.sim.max_steps = f.max_steps;
  cfg.sim.sliding_allowed = f.sliding == "on";
  cfg.sim.deadlock_epsilon = f.deadlock_epsilon;
  cfg.tryout.enabled = f.tryout == "on";
  cfg.tryout.directions = f.directions;
  cfg.tryout.reaim = !f.replay;
  cfg.validate();
  return cfg;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    vlnce::io::write_file(path, text);
  }
}

struct Loaded {
  vlnce::OccupancyGrid grid;
  std::vector<vlnce::Episode> episodes;
};

Loaded load(const std::string& scene, const std::string& episodes) {
  Loaded l;
  l.grid = vlnce::io::parse_scene(vlnce::io::read_file(scene));
  l.episodes = vlnce::io::parse_episodes(vlnce::io::read_file(episodes), l.grid);
  return l;
}

const vlnce::Episode& find_episode(const std::vector<vlnce::Episode>& eps, const std::string& id) {
  for (const auto& e : eps)
    if (e.id == id) return e;
  throw vlnce::ValidationError("no such episode", id);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-environment instruction-following navigation simulator"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file whose keys mirror the command-line flags");

  // gen
  vlnce::GenParams gen;
  int corridors = 0;
  int corridor_length = 96;
  int corridor_width = 3;
  std::string gen_scene_out;
  std::string gen_episodes_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a scene and its episodes");
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--width", gen.width, "Grid width in cells");
  gen_cmd->add_option("--height", gen.height, "Grid height in cells");
  gen_cmd->add_option("--resolution", gen.resolution, "Meters per cell");
  gen_cmd->add_option("--density", gen.obstacle_density, "Clutter fraction in [0, 1)");
  gen_cmd->add_option("--traps", gen.trap_count, "Number of dead-end trap stamps");
  gen_cmd->add_option("--trap-length", gen.trap_length, "Trap channel length in cells");
  gen_cmd->add_option("--lure-fraction", gen.lure_fraction, "Share of episodes aimed through a trap");
  gen_cmd->add_option("--count", gen.episode_count, "Number of episodes");
  gen_cmd->add_option("--min-geodesic", gen.min_geodesic, "Minimum start-goal geodesic distance (m)");
  gen_cmd->add_option("--max-retries", gen.max_retries, "Placement attempts per episode");
  gen_cmd->add_option("--corridors", corridors, "Generate N parallel straight corridors instead");
  gen_cmd->add_option("--corridor-length", corridor_length, "Corridor length in cells");
  gen_cmd->add_option("--corridor-width", corridor_width, "Corridor width in cells");
  gen_cmd->add_option("--scene-out", gen_scene_out, "Scene JSON output")->required();
  gen_cmd->add_option("--episodes-out", gen_episodes_out, "Episode JSON output")->required();

  RunFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Run one configuration over an episode set");
  add_run_flags(run_cmd, run_flags, true);
  run_cmd->add_option("--logs", run_flags.logs, "Trajectory log JSON output");

  RunFlags ablate_flags;
  auto* ablate_cmd = app.add_subcommand("ablate", "Run the sliding x tryout grid");
  add_run_flags(ablate_cmd, ablate_flags, false);

  std::string eval_scene, eval_episodes, eval_logs, eval_out;
  auto* eval_cmd = app.add_subcommand("eval", "Recompute metrics from stored trajectory logs");
  eval_cmd->add_option("--scene", eval_scene)->required();
  eval_cmd->add_option("--episodes", eval_episodes)->required();
  eval_cmd->add_option("--logs", eval_logs)->required();
  eval_cmd->add_option("--out", eval_out, "CSV output path (stdout if omitted)");

  std::string plot_scene, plot_episodes, plot_logs, plot_id, plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "SVG of executed vs reference trajectory");
  plot_cmd->add_option("--scene", plot_scene)->required();
  plot_cmd->add_option("--episodes", plot_episodes)->required();
  plot_cmd->add_option("--logs", plot_logs)->required();
  plot_cmd->add_option("--episode-id", plot_id)->required();
  plot_cmd->add_option("--out", plot_out, "SVG output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen_cmd->parsed()) {
      const vlnce::GeneratedScene g =
          corridors > 0 ? vlnce::generate_corridor_suite(corridors, corridor_length, corridor_width, gen.resolution, gen.seed)
                        : vlnce::generate_scene(gen);
      vlnce::io::write_file(gen_scene_out, vlnce::io::serialize_scene(g.grid));
      vlnce::io::write_file(gen_episodes_out, vlnce::io::serialize_episodes(g.episodes));
      std::cerr << "wrote " << g.episodes.size() << " episodes on " << g.grid.width() << "x" << g.grid.height()
                << " grid '" << g.grid.id() << "'\n";
    } else if (run_cmd->parsed()) {
      const auto cfg = make_run_config(run_flags);
      const Loaded l = load(run_flags.scene, run_flags.episodes);
      const vlnce::RunResult r = vlnce::run_suite(l.grid, l.episodes, cfg);
      emit(run_flags.out, vlnce::metrics_csv(r.episodes));
      if (!run_flags.logs.empty()) vlnce::io::write_file(run_flags.logs, vlnce::io::serialize_logs(r, cfg));
      for (const auto& e : r.episodes)
        if (e.skipped()) std::cerr << "skipped " << e.episode_id << ": " << e.diagnostic << '\n';
      std::cerr << vlnce::summary_table(r.aggregate, r.evaluated);
    } else if (ablate_cmd->parsed()) {
      const auto cfg = make_run_config(ablate_flags);
      const Loaded l = load(ablate_flags.scene, ablate_flags.episodes);
      const auto rows = vlnce::run_ablation_grid(l.grid, l.episodes, cfg);
      emit(ablate_flags.out, vlnce::ablation_csv(rows));
      for (const auto& row : rows)
        std::fprintf(stderr, "%-24s SR %6.2f  SPL %6.2f  NDTW %6.2f\n", row.label().c_str(), 100 * row.aggregate.success,
                     100 * row.aggregate.spl, 100 * row.aggregate.ndtw);
    } else if (eval_cmd->parsed()) {
      const Loaded l = load(eval_scene, eval_episodes);
      const std::string text = vlnce::io::read_file(eval_logs);
      const auto logs = vlnce::io::parse_logs(text);
      const vlnce::SimConfig sim = vlnce::io::sim_config_from_logs(vlnce::io::parse_json(text));
      std::vector<vlnce::EpisodeResult> results;
      for (const auto& stored : logs) {
        vlnce::EpisodeResult r;
        r.episode_id = stored.episode_id;
        r.end = stored.end;
        r.log = stored.log;
        if (!r.skipped()) r.metrics = vlnce::evaluate_episode(find_episode(l.episodes, stored.episode_id), r.log, l.grid, sim);
        results.push_back(std::move(r));
      }
      emit(eval_out, vlnce::metrics_csv(results));
      std::size_t n = 0;
      const auto agg = vlnce::aggregate_results(results, &n);
      std::cerr << vlnce::summary_table(agg, n);
    } else if (plot_cmd->parsed()) {
      const Loaded l = load(plot_scene, plot_episodes);
      const auto logs = vlnce::io::parse_logs(vlnce::io::read_file(plot_logs));
      const vlnce::Episode& ep = find_episode(l.episodes, plot_id);
      const vlnce::io::StoredLog* match = nullptr;
      for (const auto& s : logs)
        if (s.episode_id == plot_id) match = &s;
      if (!match) throw vlnce::ValidationError("no log for episode", plot_id);
      emit(plot_out, vlnce::plot_trajectory_svg(l.grid, ep, match->log));
    }
  } catch (const vlnce::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const vlnce::ParseError& e) {
    std::cerr << "parse error at byte " << e.offset() << ": " << e.what() << '\n';
    return kValidation;
  } catch (const vlnce::VersionError& e) {
    std::cerr << "version error: " << e.what() << '\n';
    return kValidation;
  } catch (const vlnce::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kOk;
}
