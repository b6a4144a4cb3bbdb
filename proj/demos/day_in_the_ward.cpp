// Runs one scenario end to end and narrates the patient's day: goal
// adoptions, disorientation spells, watch interventions and nurse rescues,
// followed by the aggregate summary.
//
//   day_in_the_ward [scenario.json] [max_lines] [key=value ...]
//
// Trailing key=value pairs patch the scenario document, e.g.
// `pwd.capacity=0.2` to make every patient forgetful.

#include <cstdio>
#include <string>

#include "wardsim/engine.hpp"
#include "wardsim/metrics.hpp"
#include "wardsim/scenario.hpp"

using namespace wardsim;

int main(int argc, char** argv) {
  const std::string scenario_file =
      argc > 1 ? argv[1] : "assets/scenarios/ward_small.json";
  const int max_lines = argc > 2 ? std::atoi(argv[2]) : 40;
  try {
    Scenario sc = Scenario::load(scenario_file);
    if (argc > 3) {
      nlohmann::json doc = sc.doc;
      for (int i = 3; i < argc; ++i) apply_override(doc, argv[i]);
      sc = Scenario::from_json(std::move(doc), sc.base_dir);
    }
    const World world = World::build(sc);
    Simulation sim(world, sc);
    sim.run();

    int shown = 0;
    for (const SimEvent& e : sim.events()) {
      if (e.kind == EventKind::Moved) continue;  // too chatty for a story
      if (++shown > max_lines) {
        std::printf("  ... (%zu events in total)\n", sim.events().size());
        break;
      }
      std::printf("  t=%-6lld %-8s %-13s %s\n", static_cast<long long>(e.tick),
                  e.agent.c_str(), event_kind_name(e.kind), e.data.dump().c_str());
    }

    const RunSummary s = summarize_run(world, sim, sc.horizon);
    std::printf("trips completed/abandoned: %d/%d\n", s.trips_completed,
                s.trips_abandoned);
    std::printf("travel efficiency: %s\n",
                s.te ? metrics_detail::num(*s.te).c_str() : "n/a");
    std::printf("disorientation episodes: %d (mean length %s steps)\n",
                s.episode_count, metrics_detail::num_or_na(s.episode_mean).c_str());
    std::printf("time oriented/disoriented/guided: %.1f%% / %.1f%% / %.1f%%\n",
                s.pct_oriented, s.pct_disoriented, s.pct_guided);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
