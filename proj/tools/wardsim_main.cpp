// wardsim: deterministic indoor-navigation simulator for assisted-care
// scenarios.  Subcommands: validate, run, sweep, render.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wardsim/engine.hpp"
#include "wardsim/metrics.hpp"
#include "wardsim/render.hpp"
#include "wardsim/scenario.hpp"

namespace {

using namespace wardsim;

nlohmann::json read_scenario_doc(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open scenario '" + file + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("scenario '" + file + "': " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::size_t from = 0;
  while (from <= text.size()) {
    const std::size_t comma = text.find(',', from);
    const std::string item =
        text.substr(from, comma == std::string::npos ? comma : comma - from);
    if (!item.empty()) items.push_back(item);
    if (comma == std::string::npos) break;
    from = comma + 1;
  }
  return items;
}

std::vector<double> parse_capacities(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split_list(text)) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::runtime_error("bad capacity '" + item + "'");
    }
  }
  if (out.empty()) throw std::runtime_error("--capacities is empty");
  return out;
}

// "1,2,5..8" -> 1 2 5 6 7 8
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const std::string& item : split_list(text)) {
    const std::size_t dots = item.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(std::stoull(item));
      } else {
        const std::uint64_t lo = std::stoull(item.substr(0, dots));
        const std::uint64_t hi = std::stoull(item.substr(dots + 2));
        if (hi < lo) throw std::runtime_error("empty range");
        for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
      }
    } catch (const std::exception&) {
      throw std::runtime_error("bad seed item '" + item + "' (use N or N..M)");
    }
  }
  if (out.empty()) throw std::runtime_error("--seeds is empty");
  return out;
}

struct CommonArgs {
  std::string scenario_file;
  std::vector<std::string> overrides;
  std::int64_t seed = -1;
  std::int64_t steps = -1;
  std::string cache_dir;
};

Scenario load_with_overrides(const CommonArgs& args) {
  nlohmann::json doc = read_scenario_doc(args.scenario_file);
  for (const std::string& o : args.overrides) apply_override(doc, o);
  if (args.seed >= 0) doc["seed"] = static_cast<std::uint64_t>(args.seed);
  if (args.steps >= 0) doc["horizon"] = args.steps;
  return Scenario::from_json(std::move(doc),
                             std::filesystem::path(args.scenario_file).parent_path());
}

int cmd_validate(const CommonArgs& args) {
  nlohmann::json doc = read_scenario_doc(args.scenario_file);
  for (const std::string& o : args.overrides) apply_override(doc, o);
  std::vector<ScenarioIssue> issues = Scenario::check(doc);
  if (issues.empty()) {
    const Scenario sc = Scenario::from_json(
        doc, std::filesystem::path(args.scenario_file).parent_path());
    const GridMap map = sc.load_map();
    issues = cross_check(sc, map);
    for (ScenarioIssue& i : place_agents(sc, map).issues) issues.push_back(std::move(i));
    const NavGraph nav(map, sc.lambda);
    if (nav.vertex_count() > sc.max_vertices)
      issues.push_back({"$.max_vertices",
                        "map has " + std::to_string(nav.vertex_count()) +
                            " navigable cells, above the limit of " +
                            std::to_string(sc.max_vertices)});
    if (issues.empty()) {
      std::printf("scenario OK: map %dx%d, %u navigable cells, %zu patients, "
                  "%zu nurses, %zu watches\n",
                  map.width(), map.height(), nav.vertex_count(), sc.pwds.size(),
                  sc.nurses.size(), sc.watches.size());
      return 0;
    }
  }
  std::fprintf(stderr, "scenario has %zu issue(s):\n", issues.size());
  for (const ScenarioIssue& i : issues)
    std::fprintf(stderr, "  %s: %s\n", i.path.c_str(), i.message.c_str());
  return 1;
}

int cmd_run(const CommonArgs& args, const std::string& out_dir) {
  const Scenario sc = load_with_overrides(args);
  bool cached = false;
  const World world = World::build(sc, args.cache_dir, &cached);
  std::printf("path table: %s (%u vertices)\n", cached ? "cached" : "computed",
              world.routes.vertex_count());
  Simulation sim(world, sc);
  sim.run();
  write_run_artifacts(out_dir, sc, world, sim);
  const RunSummary s = summarize_run(world, sim, sc.horizon);
  std::printf("run complete: %lld steps, %zu events\n",
              static_cast<long long>(sc.horizon), sim.events().size());
  std::printf("  trips: %d completed, %d abandoned\n", s.trips_completed,
              s.trips_abandoned);
  std::printf("  travel efficiency: %s\n",
              s.te ? metrics_detail::num(*s.te).c_str() : "n/a");
  std::printf("  disorientation episodes: %d (mean %s, sd %s)\n", s.episode_count,
              metrics_detail::num_or_na(s.episode_mean).c_str(),
              metrics_detail::num_or_na(s.episode_stddev).c_str());
  std::printf("  state shares: %.1f%% oriented, %.1f%% disoriented, %.1f%% guided\n",
              s.pct_oriented, s.pct_disoriented, s.pct_guided);
  std::printf("artifacts in %s\n", out_dir.c_str());
  return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& out_dir,
              const std::string& capacities, const std::string& modes,
              const std::string& seeds, int threads) {
  const Scenario base = load_with_overrides(args);
  SweepPlan plan;
  plan.capacities = parse_capacities(capacities);
  plan.modes = split_list(modes);
  if (plan.modes.empty()) throw std::runtime_error("--modes is empty");
  for (const std::string& m : plan.modes)
    if (m != "none" && m != "nurse" && m != "nurse+watch")
      throw std::runtime_error("unknown mode '" + m + "' (none, nurse, nurse+watch)");
  plan.seeds = parse_seeds(seeds);
  plan.threads = threads;

  const World world = World::build(base, args.cache_dir);
  const std::size_t n_jobs = plan.capacities.size() * plan.modes.size() * plan.seeds.size();
  std::printf("sweep: %zu replicates on %d thread(s)\n", n_jobs, std::max(1, threads));
  const std::vector<SweepResult> results = run_sweep(base, world, plan);
  write_sweep_artifacts(out_dir, base, world, plan, results);

  std::printf("%-10s %-12s %-8s %-18s %-14s %s\n", "capacity", "mode", "reps", "te",
              "episodes", "mu");
  for (const AggregateRow& row : aggregate_sweep(results)) {
    const std::string te = row.te_mean
        ? metrics_detail::num(*row.te_mean) + "+-" + metrics_detail::num(*row.te_se)
        : std::string("n/a");
    const std::string mu = row.mu_mean
        ? metrics_detail::num(*row.mu_mean) + "+-" + metrics_detail::num(*row.mu_se)
        : std::string("n/a");
    std::printf("%-10s %-12s %-8d %-18s %-14.2f %s\n",
                metrics_detail::short_num(row.capacity).c_str(), row.mode.c_str(),
                row.replicates, te.c_str(), row.n_mean, mu.c_str());
  }
  std::printf("artifacts in %s\n", out_dir.c_str());
  return 0;
}

int cmd_render(const std::string& map_file, const std::string& trajectory_file,
               const std::string& out_file, int scale) {
  const ImageRgb8 map_image = read_png_rgb8(map_file);
  std::ifstream in(trajectory_file);
  if (!in) throw std::runtime_error("cannot open trajectory '" + trajectory_file + "'");
  const auto points = read_trajectory_csv(in, trajectory_file);
  const ImageRgb8 overlay = render_overlay(map_image, points, scale);
  write_png_rgb8(out_file, overlay);
  std::printf("rendered %zu trajectory points to %s\n", points.size(), out_file.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wardsim: deterministic assisted indoor-navigation simulator"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string out_dir = "out";
  std::string capacities = "1.0,0.5,0.1";
  std::string modes = "none,nurse,nurse+watch";
  std::string seeds = "1..20";
  int threads = 1;
  std::string map_file, trajectory_file, out_file;
  int scale = 1;

  auto add_scenario = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", args.scenario_file, "scenario JSON file")->required();
    cmd->add_option("--override", args.overrides,
                    "key=value tweak; repeatable (pwd.sight=6, lambda=2, p1.capacity=0.5)");
  };

  CLI::App* validate = app.add_subcommand("validate", "check a scenario and its map");
  add_scenario(validate);

  CLI::App* run = app.add_subcommand("run", "run one scenario and write artifacts");
  add_scenario(run);
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--seed", args.seed, "master seed (overrides the scenario)");
  run->add_option("--steps", args.steps, "horizon in steps (overrides the scenario)");
  run->add_option("--cache-dir", args.cache_dir,
                  "path-table cache directory (default $WARDSIM_CACHE_DIR)");

  CLI::App* sweep = app.add_subcommand("sweep", "run a (capacity, mode, seed) grid");
  add_scenario(sweep);
  sweep->add_option("--out", out_dir, "output directory")->required();
  sweep->add_option("--capacities", capacities, "comma list of memory capacities");
  sweep->add_option("--modes", modes, "comma list of none,nurse,nurse+watch");
  sweep->add_option("--seeds", seeds, "comma list of seeds; N..M ranges allowed");
  sweep->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--steps", args.steps, "horizon in steps (overrides the scenario)");
  sweep->add_option("--cache-dir", args.cache_dir,
                    "path-table cache directory (default $WARDSIM_CACHE_DIR)");

  CLI::App* render = app.add_subcommand("render", "draw a trajectory over the map image");
  render->add_option("--map", map_file, "map PNG")->required();
  render->add_option("--trajectory", trajectory_file, "trajectory CSV from a run")->required();
  render->add_option("--out", out_file, "output PNG")->required();
  render->add_option("--scale", scale, "pixels per cell")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(args);
    if (run->parsed()) return cmd_run(args, out_dir);
    if (sweep->parsed()) return cmd_sweep(args, out_dir, capacities, modes, seeds, threads);
    if (render->parsed()) return cmd_render(map_file, trajectory_file, out_file, scale);
  } catch (const wardsim::ScenarioError& e) {
    std::fprintf(stderr, "scenario has %zu issue(s):\n", e.issues().size());
    for (const wardsim::ScenarioIssue& i : e.issues())
      std::fprintf(stderr, "  %s: %s\n", i.path.c_str(), i.message.c_str());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
