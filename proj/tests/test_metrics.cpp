#include <gtest/gtest.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "support/ascii_map.hpp"
#include "support/sim_rig.hpp"
#include "support/tmpdir.hpp"
#include "wardsim/metrics.hpp"

using namespace wardsim;
using test_support::SimRig;
using test_support::TmpDir;
using test_support::ascii_map;
using test_support::base_doc;
using test_support::nurse_json;
using test_support::pwd_json;
using test_support::watch_json;

namespace {

SimEvent ev(Tick tick, const std::string& agent, EventKind kind, nlohmann::json data) {
  return {tick, agent, kind, std::move(data)};
}

nlohmann::json xy(int x, int y) { return nlohmann::json::array({x, y}); }

struct TripFixture {
  GridMap map = ascii_map({
      "########",
      "#H....T#",
      "########",
  });
  PathTable metric = PathTable::compute(NavGraph(map, 1.0));
};

TEST(Trips, CompletedTripMeasuresShortestAndTraveled) {
  TripFixture f;
  std::vector<SimEvent> events;
  events.push_back(ev(2, "p1", EventKind::GoalAdopted,
                      {{"kind", "appointment"}, {"location", "toilet"}, {"ref", 0},
                       {"pos", xy(1, 1)}}));
  for (int x = 1; x < 6; ++x)
    events.push_back(
        ev(2 + x, "p1", EventKind::Moved, {{"from", xy(x, 1)}, {"to", xy(x + 1, 1)}}));
  events.push_back(ev(7, "p1", EventKind::GoalReached,
                      {{"kind", "appointment"}, {"location", "toilet"}, {"ref", 0},
                       {"pos", xy(6, 1)}}));

  const auto trips = extract_trips(events, f.map, f.metric, 100);
  ASSERT_EQ(trips.size(), 1u);
  const TripRecord& t = trips[0];
  EXPECT_EQ(t.agent, "p1");
  EXPECT_EQ(t.kind, "appointment");
  EXPECT_EQ(t.location, "toilet");
  EXPECT_EQ(t.ref, 0);
  EXPECT_EQ(t.adopted, 2);
  EXPECT_EQ(t.closed, 7);
  EXPECT_TRUE(t.completed);
  EXPECT_NEAR(t.shortest_m, 2.5, 1e-12);
  EXPECT_NEAR(t.traveled_m, 2.5, 1e-12);

  const auto te = travel_efficiency(trips);
  ASSERT_TRUE(te.has_value());
  EXPECT_NEAR(*te, 1.0, 1e-12);
}

TEST(Trips, DetourLowersEfficiency) {
  TripFixture f;
  std::vector<SimEvent> events;
  events.push_back(ev(0, "p1", EventKind::GoalAdopted,
                      {{"kind", "home"}, {"location", "home:p1"}, {"ref", -1},
                       {"pos", xy(3, 1)}}));
  // Two cells east before turning around: 2 + 2 + 2 = 6 steps for a
  // 2-step errand.
  const int xs[] = {3, 4, 5, 4, 3, 2, 1};
  for (int i = 0; i + 1 < 7; ++i)
    events.push_back(
        ev(i + 1, "p1", EventKind::Moved, {{"from", xy(xs[i], 1)}, {"to", xy(xs[i + 1], 1)}}));
  events.push_back(ev(6, "p1", EventKind::GoalReached,
                      {{"kind", "home"}, {"location", "home:p1"}, {"ref", -1},
                       {"pos", xy(1, 1)}}));
  const auto trips = extract_trips(events, f.map, f.metric, 100);
  ASSERT_EQ(trips.size(), 1u);
  EXPECT_NEAR(trips[0].shortest_m, 1.0, 1e-12);
  EXPECT_NEAR(trips[0].traveled_m, 3.0, 1e-12);
  const auto te = travel_efficiency(trips);
  ASSERT_TRUE(te.has_value());
  EXPECT_NEAR(*te, 1.0 / 3.0, 1e-12);
}

TEST(Trips, AbandonmentClosesAtNextAdoptionOrHorizon) {
  TripFixture f;
  std::vector<SimEvent> events;
  events.push_back(ev(0, "p1", EventKind::GoalAdopted,
                      {{"kind", "home"}, {"location", "home:p1"}, {"ref", -1},
                       {"pos", xy(4, 1)}}));
  events.push_back(ev(3, "p1", EventKind::GoalAdopted,
                      {{"kind", "need"}, {"location", "toilet"}, {"ref", 0},
                       {"pos", xy(4, 1)}}));
  const auto trips = extract_trips(events, f.map, f.metric, 50);
  ASSERT_EQ(trips.size(), 2u);
  EXPECT_FALSE(trips[0].completed);
  EXPECT_EQ(trips[0].kind, "home");
  EXPECT_EQ(trips[0].closed, 3);  // pre-empted by the new goal
  EXPECT_FALSE(trips[1].completed);
  EXPECT_EQ(trips[1].kind, "need");
  EXPECT_EQ(trips[1].closed, 50);  // still open at the end of the run

  // Neither abandoned trip counts toward efficiency.
  EXPECT_FALSE(travel_efficiency(trips).has_value());
}

TEST(Trips, ZeroTravelCompletionsAreExcludedFromEfficiency) {
  TripFixture f;
  std::vector<SimEvent> events;
  events.push_back(ev(0, "p1", EventKind::GoalAdopted,
                      {{"kind", "home"}, {"location", "home:p1"}, {"ref", -1},
                       {"pos", xy(1, 1)}}));
  events.push_back(ev(0, "p1", EventKind::GoalReached,
                      {{"kind", "home"}, {"location", "home:p1"}, {"ref", -1},
                       {"pos", xy(1, 1)}}));
  const auto trips = extract_trips(events, f.map, f.metric, 10);
  ASSERT_EQ(trips.size(), 1u);
  EXPECT_TRUE(trips[0].completed);
  EXPECT_NEAR(trips[0].traveled_m, 0.0, 1e-12);
  EXPECT_FALSE(travel_efficiency(trips).has_value());
  EXPECT_FALSE(travel_efficiency({}).has_value());
}

TEST(Episodes, EventAndTrajectoryExtractionsAgreeOnHandMadeLog) {
  std::vector<SimEvent> events;
  events.push_back(ev(3, "p1", EventKind::StateChanged,
                      {{"from", "oriented"}, {"to", "disoriented"}, {"cause", "memory"}}));
  events.push_back(ev(7, "p1", EventKind::StateChanged,
                      {{"from", "disoriented"}, {"to", "guided"}, {"cause", "nurse"}}));
  events.push_back(ev(9, "p1", EventKind::StateChanged,
                      {{"from", "guided"}, {"to", "oriented"}, {"cause", "nurse"}}));
  events.push_back(ev(12, "p1", EventKind::StateChanged,
                      {{"from", "oriented"}, {"to", "disoriented"}, {"cause", "memory"}}));

  const auto eps = episodes_from_events(events, 20);
  ASSERT_EQ(eps.size(), 2u);
  EXPECT_EQ(eps[0].start, 3);
  EXPECT_EQ(eps[0].length, 4);  // guided at tick 7 ends the episode
  EXPECT_EQ(eps[1].start, 12);
  EXPECT_EQ(eps[1].length, 8);  // open at the horizon

  std::vector<Simulation::TrajPoint> traj;
  const std::string pattern = "OOODDDDGGOOODDDDDDDD";
  for (Tick t = 0; t < 20; ++t)
    traj.push_back({t, 0, 0, pattern[static_cast<std::size_t>(t)]});
  const auto eps2 = episodes_from_trajectory("p1", traj);
  ASSERT_EQ(eps2.size(), eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    EXPECT_EQ(eps2[i].start, eps[i].start);
    EXPECT_EQ(eps2[i].length, eps[i].length);
  }
}

// The busy ward from the engine suite, trimmed: two patients, one nurse,
// one watch, enough randomness to produce real episodes and trips.
const std::vector<std::string> kWard = {
    "############",
    "#H....#...*#",
    "#.....#....#",
    "#..*.....T.#",
    "#G....#...N#",
    "############",
};

nlohmann::json ward_doc(long long seed) {
  nlohmann::json doc = base_doc(/*horizon=*/300, seed);
  nlohmann::json p1 = pwd_json("p1", "home:p1");
  p1["capacity"] = 0.3;
  p1["p_forget_cell"] = 0.02;
  p1["p_landmarks"] = 0.3;
  p1["p_interventions"] = 0.4;
  p1["sight"] = 5;
  p1["schedule"] = {{{"start", 40}, {"duration", 30}, {"location", "toilet"}}};
  nlohmann::json p2 = pwd_json("p2", "home:p2");
  p2["capacity"] = 0.5;
  p2["p_forget_cell"] = 0.03;
  p2["needs"] = {{{"name", "toilet"},
                  {"growth_rate", 0.02},
                  {"threshold", 1.0},
                  {"location", "toilet"},
                  {"service_time", 2}}};
  nlohmann::json n1 = nurse_json("n1", "nurse-station");
  n1["sight"] = 7;
  nlohmann::json w1 = watch_json("w1", "p1");
  w1["sensor_model"] = 0.6;
  w1["n_help"] = 1;
  w1["cooldown"] = 3;
  doc["agents"] = {p1, p2, n1, w1};
  return doc;
}

TEST(Episodes, EventAndTrajectoryExtractionsAgreeOnRealRuns) {
  SimRig rig(kWard, ward_doc(21));
  Simulation& sim = rig.sim();
  sim.run();

  const auto from_events = episodes_from_events(sim.events(), rig.scenario().horizon);
  std::size_t total = 0;
  for (std::size_t i = 0; i < sim.pwd_count(); ++i) {
    const std::string agent = sim.pwd(i).cfg->id;
    const auto from_traj = episodes_from_trajectory(agent, sim.trajectories()[i]);
    std::vector<Episode> mine;
    for (const Episode& e : from_events)
      if (e.agent == agent) mine.push_back(e);
    ASSERT_EQ(mine.size(), from_traj.size()) << agent;
    for (std::size_t k = 0; k < mine.size(); ++k) {
      EXPECT_EQ(mine[k].start, from_traj[k].start) << agent << " episode " << k;
      EXPECT_EQ(mine[k].length, from_traj[k].length) << agent << " episode " << k;
    }
    total += mine.size();
  }
  EXPECT_GT(total, 0u);  // the run produced real disorientation
}

TEST(Trips, CompletedTripsNeverBeatTheShortestPath) {
  SimRig rig(kWard, ward_doc(21));
  Simulation& sim = rig.sim();
  sim.run();
  const auto trips =
      extract_trips(sim.events(), rig.map(), rig.world().metric(), rig.scenario().horizon);
  int measured = 0;
  for (const TripRecord& t : trips) {
    if (!t.completed || t.traveled_m <= 0.0) continue;
    ASSERT_NE(t.shortest_m, PathTable::kUnreachable);
    EXPECT_GE(t.traveled_m, t.shortest_m - 1e-9) << t.agent << " @" << t.adopted;
    ++measured;
  }
  EXPECT_GT(measured, 0);
  const auto te = travel_efficiency(trips);
  ASSERT_TRUE(te.has_value());
  EXPECT_GT(*te, 0.0);
  EXPECT_LE(*te, 1.0 + 1e-12);
}

TEST(Summary, DeterministicCorridorRun) {
  const std::vector<std::string> corridor = {
      "########",
      "#H....T#",
      "########",
  };
  nlohmann::json doc = base_doc(/*horizon=*/25, /*seed=*/3);
  nlohmann::json p1 = pwd_json("p1", "home:p1");
  p1["capacity"] = 1.0;
  p1["schedule"] = {{{"start", 5}, {"duration", 10}, {"location", "toilet"}}};
  doc["agents"] = {p1};
  SimRig rig(corridor, doc);
  rig.sim().run();

  const RunSummary s = summarize_run(rig.world(), rig.sim(), rig.scenario().horizon);
  EXPECT_EQ(s.horizon, 25);
  EXPECT_EQ(s.pwds, 1);
  EXPECT_EQ(s.nurses, 0);
  EXPECT_EQ(s.watches, 0);
  EXPECT_EQ(s.trips_completed, 3);
  EXPECT_EQ(s.trips_abandoned, 0);
  ASSERT_TRUE(s.te.has_value());
  EXPECT_NEAR(*s.te, 1.0, 1e-12);  // both walks are straight lines
  EXPECT_EQ(s.episode_count, 0);
  EXPECT_FALSE(s.episode_mean.has_value());
  EXPECT_FALSE(s.episode_stddev.has_value());
  EXPECT_NEAR(s.pct_oriented, 100.0, 1e-12);
  EXPECT_NEAR(s.pct_disoriented, 0.0, 1e-12);
  EXPECT_NEAR(s.pct_guided, 0.0, 1e-12);

  const nlohmann::json j = summary_to_json(s);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["trips"]["completed"], 3);
  EXPECT_NEAR(j["travel_efficiency"].get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(j["episodes"]["mean"].is_null());
}

TEST(Summary, EpisodeStatisticsOnAPinnedCadence) {
  // The escalation scenario settles into a five-tick cycle: three
  // disoriented ticks, one guided, one oriented.
  const std::vector<std::string> ward = {
      "##########",
      "#N.......#",
      "#H.......#",
      "#......T.#",
      "##########",
  };
  nlohmann::json doc = base_doc(/*horizon=*/20, /*seed=*/1);
  nlohmann::json p1 = pwd_json("p1", "home:p1");
  p1["capacity"] = 0.05;
  p1["sight"] = 12;
  p1["fov"] = 360;
  p1["p_landmarks"] = 0.0;
  p1["p_interventions"] = 0.0;
  nlohmann::json w1 = watch_json("w1", "p1");
  w1["sensor_model"] = 1.0;
  w1["cooldown"] = 0;
  w1["n_help"] = 2;
  nlohmann::json n1 = nurse_json("n1", "nurse-station");
  n1["sight"] = 0;
  doc["agents"] = {p1, w1, n1};
  SimRig rig(ward, doc);
  rig.sim().run();

  const RunSummary s = summarize_run(rig.world(), rig.sim(), rig.scenario().horizon);
  EXPECT_EQ(s.episode_count, 4);
  ASSERT_TRUE(s.episode_mean.has_value());
  EXPECT_NEAR(*s.episode_mean, 3.0, 1e-12);
  ASSERT_TRUE(s.episode_stddev.has_value());
  EXPECT_NEAR(*s.episode_stddev, 0.0, 1e-12);
  EXPECT_NEAR(s.pct_oriented, 20.0, 1e-9);
  EXPECT_NEAR(s.pct_disoriented, 60.0, 1e-9);
  EXPECT_NEAR(s.pct_guided, 20.0, 1e-9);
  EXPECT_EQ(s.trips_completed, 1);  // the tick-0 home trip
  EXPECT_FALSE(s.te.has_value());   // it involved no travel
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  SimRig rig(kWard, ward_doc(21));
  SweepPlan plan;
  plan.capacities = {0.05, 1.0};
  plan.modes = {"none", "nurse+watch"};
  plan.seeds = {1, 2};
  plan.threads = 1;
  const auto serial = run_sweep(rig.scenario(), rig.world(), plan);
  plan.threads = 3;
  const auto parallel = run_sweep(rig.scenario(), rig.world(), plan);

  std::ostringstream a, b;
  write_replicates_csv(a, serial);
  write_replicates_csv(b, parallel);
  EXPECT_EQ(a.str(), b.str());

  // Replicates come back in plan order: capacity-major, then mode, seed.
  ASSERT_EQ(serial.size(), 8u);
  EXPECT_EQ(serial[0].capacity, 0.05);
  EXPECT_EQ(serial[0].mode, "none");
  EXPECT_EQ(serial[0].seed, 1u);
  EXPECT_EQ(serial[7].capacity, 1.0);
  EXPECT_EQ(serial[7].mode, "nurse+watch");
  EXPECT_EQ(serial[7].seed, 2u);

  // Stripped modes really run without assistance.
  EXPECT_EQ(serial[0].summary.nurses, 0);
  EXPECT_EQ(serial[0].summary.watches, 0);
  EXPECT_EQ(serial[3].summary.nurses, 1);
  EXPECT_EQ(serial[3].summary.watches, 1);

  const auto rows = aggregate_sweep(serial);
  ASSERT_EQ(rows.size(), 4u);
  for (const AggregateRow& row : rows) EXPECT_EQ(row.replicates, 2);
  EXPECT_EQ(rows[0].capacity, 0.05);
  EXPECT_EQ(rows[0].mode, "none");
  EXPECT_EQ(rows[1].mode, "nurse+watch");
  EXPECT_EQ(rows[2].capacity, 1.0);
}

TEST(Csv, ReplicateAndAggregateGoldens) {
  RunSummary s1;
  s1.horizon = 100;
  s1.pwds = 1;
  s1.trips_completed = 2;
  s1.te = 0.75;
  s1.episode_count = 2;
  s1.episode_mean = 3.0;
  s1.episode_stddev = 1.0;
  s1.pct_oriented = 100.0;
  s1.pct_disoriented = 0.0;
  s1.pct_guided = 0.0;
  RunSummary s2 = s1;
  s2.te = 0.25;
  s2.episode_count = 4;
  s2.episode_mean = 5.0;
  s2.episode_stddev = 3.0;
  s2.pct_oriented = 50.0;
  s2.pct_disoriented = 50.0;
  RunSummary s3;  // nothing measurable
  s3.horizon = 100;

  const std::vector<SweepResult> results = {
      {0.25, "nurse", 1, s1},
      {0.25, "nurse", 2, s2},
      {0.5, "none", 1, s3},
  };

  std::ostringstream rep;
  write_replicates_csv(rep, results);
  EXPECT_EQ(rep.str(),
            "capacity,mode,seed,te,n,mu,sigma,pct_oriented,pct_disoriented,pct_guided\n"
            "0.25,nurse,1,0.750000,2,3.000000,1.000000,100.000000,0.000000,0.000000\n"
            "0.25,nurse,2,0.250000,4,5.000000,3.000000,50.000000,50.000000,0.000000\n"
            "0.5,none,1,n/a,0,n/a,n/a,0.000000,0.000000,0.000000\n");

  std::ostringstream agg;
  write_aggregate_csv(agg, aggregate_sweep(results));
  // te: mean 0.5, se sqrt(0.125/2) = 0.25; n: mean 3, se 1; mu: mean 4,
  // se 1; sigma: mean 2, se 1.
  EXPECT_EQ(agg.str(),
            "capacity,mode,replicates,te_mean,te_se,n_mean,n_se,mu_mean,mu_se,"
            "sigma_mean,sigma_se,pct_oriented,pct_disoriented,pct_guided\n"
            "0.25,nurse,2,0.500000,0.250000,3.000000,1.000000,4.000000,1.000000,"
            "2.000000,1.000000,75.000000,25.000000,0.000000\n"
            "0.5,none,1,n/a,n/a,0.000000,0.000000,n/a,n/a,n/a,n/a,"
            "0.000000,0.000000,0.000000\n");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

TEST(Artifacts, RunDirectoryIsByteDeterministic) {
  SimRig a(kWard, ward_doc(21));
  SimRig b(kWard, ward_doc(21));
  a.sim().run();
  b.sim().run();

  TmpDir out;
  const auto dir_a = out.path() / "a";
  const auto dir_b = out.path() / "b";
  write_run_artifacts(dir_a, a.scenario(), a.world(), a.sim());
  write_run_artifacts(dir_b, b.scenario(), b.world(), b.sim());

  const std::vector<std::string> files = {"events.jsonl", "summary.json", "manifest.json",
                                          "trajectory_p1.csv", "trajectory_p2.csv",
                                          "trajectory_n1.csv"};
  for (const std::string& f : files) {
    ASSERT_TRUE(std::filesystem::exists(dir_a / f)) << f;
    const std::string bytes = slurp(dir_a / f);
    EXPECT_FALSE(bytes.empty()) << f;
    EXPECT_EQ(bytes, slurp(dir_b / f)) << f;
  }
  // No stray files beyond the expected set.
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir_a)) {
    (void)entry;
    ++count;
  }
  EXPECT_EQ(count, files.size());
}

TEST(Artifacts, ManifestPinsTheRunInputs) {
  SimRig rig(kWard, ward_doc(9));
  rig.sim().run();
  TmpDir out;
  write_run_artifacts(out.path(), rig.scenario(), rig.world(), rig.sim());

  const nlohmann::json manifest = nlohmann::json::parse(slurp(out.path() / "manifest.json"));
  EXPECT_EQ(manifest["format"], "wardsim-run");
  EXPECT_EQ(manifest["schema"], 1);
  EXPECT_EQ(manifest["events_schema"], kEventSchemaVersion);
  EXPECT_EQ(manifest["seed"], 9);
  EXPECT_EQ(manifest["horizon"], 300);
  EXPECT_EQ(manifest["map_hash"], hash_hex(rig.map().content_hash()));
  EXPECT_EQ(manifest["scenario"], rig.scenario().doc);
  // Reproducibility contract: nothing machine- or time-dependent.
  const std::vector<std::string> keys = {"events_schema", "format", "horizon", "map_hash",
                                         "scenario",      "schema", "seed"};
  std::vector<std::string> actual;
  for (const auto& [k, v] : manifest.items()) actual.push_back(k);
  EXPECT_EQ(actual, keys);

  // The events file parses back into the identical log.
  std::ifstream in(out.path() / "events.jsonl");
  const std::vector<SimEvent> round = read_events(in);
  ASSERT_EQ(round.size(), rig.sim().events().size());
  for (std::size_t i = 0; i < round.size(); ++i)
    EXPECT_EQ(event_to_line(round[i]), event_to_line(rig.sim().events()[i]));
}

TEST(Artifacts, SweepDirectoryIsByteDeterministic) {
  SimRig rig(kWard, ward_doc(21));
  SweepPlan plan;
  plan.capacities = {0.2, 0.8};
  plan.modes = {"none", "nurse"};
  plan.seeds = {1, 2, 3};
  plan.threads = 2;
  const auto results = run_sweep(rig.scenario(), rig.world(), plan);
  ASSERT_EQ(results.size(), 12u);

  TmpDir out;
  const auto dir_a = out.path() / "a";
  const auto dir_b = out.path() / "b";
  write_sweep_artifacts(dir_a, rig.scenario(), rig.world(), plan, results);
  write_sweep_artifacts(dir_b, rig.scenario(), rig.world(), plan, results);
  for (const std::string f : {"replicates.csv", "aggregate.csv", "manifest.json"}) {
    ASSERT_TRUE(std::filesystem::exists(dir_a / f)) << f;
    EXPECT_EQ(slurp(dir_a / f), slurp(dir_b / f)) << f;
  }

  const nlohmann::json manifest = nlohmann::json::parse(slurp(dir_a / "manifest.json"));
  EXPECT_EQ(manifest["format"], "wardsim-sweep");
  EXPECT_EQ(manifest["capacities"], (std::vector<double>{0.2, 0.8}));
  EXPECT_EQ(manifest["modes"], (std::vector<std::string>{"none", "nurse"}));
  EXPECT_EQ(manifest["seeds"], (std::vector<std::uint64_t>{1, 2, 3}));

  // The replicates file has one line per job plus the header.
  const std::string rep = slurp(dir_a / "replicates.csv");
  EXPECT_EQ(static_cast<int>(std::count(rep.begin(), rep.end(), '\n')), 13);
}

}  // namespace
