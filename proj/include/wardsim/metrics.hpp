#pragma once

// Post-run analysis: trips and travel efficiency, disorientation episodes,
// state-share percentages, parameter sweeps over (capacity, mode, seed),
// and the writers for run/sweep artifact directories.
//
// Everything here works off the event log and trajectories alone, so logs
// written by one process can be analysed by another.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "wardsim/engine.hpp"
#include "wardsim/events.hpp"
#include "wardsim/geometry.hpp"
#include "wardsim/scenario.hpp"

namespace wardsim {

// --- trips ---

struct TripRecord {
  std::string agent;
  std::string kind;      // "appointment", "need", "home"
  std::string location;
  int ref = -1;
  Tick adopted = 0;
  Tick closed = 0;
  bool completed = false;
  double shortest_m = 0.0;  // unpenalised shortest distance at adoption
  double traveled_m = 0.0;  // sum of actual step lengths while the trip was open
};

// A trip opens at goal_adopted and closes at goal_reached (completed) or at
// the next adoption / end of run (abandoned).
inline std::vector<TripRecord> extract_trips(const std::vector<SimEvent>& events,
                                             const GridMap& map, const PathTable& metric,
                                             Tick horizon) {
  std::vector<TripRecord> trips;
  std::map<std::string, TripRecord> open;
  for (const SimEvent& e : events) {
    if (e.kind == EventKind::GoalAdopted) {
      if (auto it = open.find(e.agent); it != open.end()) {
        it->second.closed = e.tick;
        trips.push_back(std::move(it->second));
        open.erase(it);
      }
      TripRecord t;
      t.agent = e.agent;
      t.kind = e.data.value("kind", "");
      t.location = e.data.value("location", "");
      t.ref = e.data.value("ref", -1);
      t.adopted = e.tick;
      const CellIndex pos = map.index(e.data["pos"][0].get<int>(), e.data["pos"][1].get<int>());
      double best = PathTable::kUnreachable;
      for (CellIndex c : map.location_cells(t.location))
        best = std::min(best, metric.distance_meters(pos, c));
      t.shortest_m = best;
      open[e.agent] = std::move(t);
    } else if (e.kind == EventKind::Moved) {
      if (auto it = open.find(e.agent); it != open.end()) {
        const CellCoord from{e.data["from"][0].get<int>(), e.data["from"][1].get<int>()};
        const CellCoord to{e.data["to"][0].get<int>(), e.data["to"][1].get<int>()};
        it->second.traveled_m += euclidean_meters(from, to);
      }
    } else if (e.kind == EventKind::GoalReached) {
      if (auto it = open.find(e.agent); it != open.end()) {
        it->second.closed = e.tick;
        it->second.completed = true;
        trips.push_back(std::move(it->second));
        open.erase(it);
      }
    }
  }
  for (auto& [agent, t] : open) {
    t.closed = horizon;
    trips.push_back(std::move(t));
  }
  return trips;
}

// Mean of per-trip shortest/traveled over completed trips with positive
// travel; nullopt when no trip qualifies.
inline std::optional<double> travel_efficiency(const std::vector<TripRecord>& trips) {
  double sum = 0.0;
  int count = 0;
  for (const TripRecord& t : trips) {
    if (!t.completed || t.traveled_m <= 0.0) continue;
    if (t.shortest_m == PathTable::kUnreachable) continue;
    sum += t.shortest_m / t.traveled_m;
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

// --- disorientation episodes ---

struct Episode {
  std::string agent;
  Tick start = 0;   // first tick whose end-of-tick state is disoriented
  Tick length = 0;  // consecutive such ticks; open episodes close at horizon
};

inline std::vector<Episode> episodes_from_events(const std::vector<SimEvent>& events,
                                                 Tick horizon) {
  // Last state change per (agent, tick) wins: that is the end-of-tick state.
  std::map<std::string, std::map<Tick, std::string>> changes;
  for (const SimEvent& e : events) {
    if (e.kind != EventKind::StateChanged) continue;
    const std::string to = e.data.value("to", "");
    if (to != "oriented" && to != "disoriented" && to != "guided") continue;
    changes[e.agent][e.tick] = to;
  }
  std::vector<Episode> episodes;
  for (const auto& [agent, by_tick] : changes) {
    bool in_episode = false;
    Tick ep_start = 0;
    for (const auto& [tick, to] : by_tick) {
      if (in_episode && to != "disoriented") {
        episodes.push_back({agent, ep_start, tick - ep_start});
        in_episode = false;
      }
      if (!in_episode && to == "disoriented") {
        in_episode = true;
        ep_start = tick;
      }
    }
    if (in_episode) episodes.push_back({agent, ep_start, horizon - ep_start});
  }
  return episodes;
}

inline std::vector<Episode> episodes_from_trajectory(
    const std::string& agent, const std::vector<Simulation::TrajPoint>& points) {
  std::vector<Episode> episodes;
  bool in_episode = false;
  Tick ep_start = 0;
  for (const Simulation::TrajPoint& pt : points) {
    if (pt.state == 'D' && !in_episode) {
      in_episode = true;
      ep_start = pt.tick;
    } else if (pt.state != 'D' && in_episode) {
      episodes.push_back({agent, ep_start, pt.tick - ep_start});
      in_episode = false;
    }
  }
  if (in_episode && !points.empty())
    episodes.push_back({agent, ep_start, points.back().tick + 1 - ep_start});
  return episodes;
}

// --- run summary ---

struct RunSummary {
  Tick horizon = 0;
  int pwds = 0, nurses = 0, watches = 0;
  int trips_completed = 0, trips_abandoned = 0;
  std::optional<double> te;
  int episode_count = 0;
  std::optional<double> episode_mean, episode_stddev;  // over episode lengths
  double pct_oriented = 0.0, pct_disoriented = 0.0, pct_guided = 0.0;
};

inline RunSummary summarize_run(const World& world, const Simulation& sim, Tick horizon) {
  RunSummary s;
  s.horizon = horizon;
  s.pwds = static_cast<int>(sim.pwd_count());
  s.nurses = static_cast<int>(sim.nurse_count());
  s.watches = static_cast<int>(sim.watch_count());

  const std::vector<TripRecord> trips =
      extract_trips(sim.events(), world.map, world.metric(), horizon);
  for (const TripRecord& t : trips)
    (t.completed ? s.trips_completed : s.trips_abandoned)++;
  s.te = travel_efficiency(trips);

  const std::vector<Episode> episodes = episodes_from_events(sim.events(), horizon);
  s.episode_count = static_cast<int>(episodes.size());
  if (!episodes.empty()) {
    double sum = 0.0;
    for (const Episode& e : episodes) sum += static_cast<double>(e.length);
    const double mean = sum / static_cast<double>(episodes.size());
    double var = 0.0;
    for (const Episode& e : episodes) {
      const double d = static_cast<double>(e.length) - mean;
      var += d * d;
    }
    s.episode_mean = mean;
    s.episode_stddev = std::sqrt(var / static_cast<double>(episodes.size()));
  }

  std::int64_t counts[3] = {0, 0, 0};  // O, D, G
  std::int64_t total = 0;
  for (std::size_t i = 0; i < sim.pwd_count(); ++i) {
    for (const Simulation::TrajPoint& pt : sim.trajectories()[i]) {
      if (pt.state == 'O') ++counts[0];
      else if (pt.state == 'D') ++counts[1];
      else if (pt.state == 'G') ++counts[2];
      ++total;
    }
  }
  if (total > 0) {
    s.pct_oriented = 100.0 * static_cast<double>(counts[0]) / static_cast<double>(total);
    s.pct_disoriented = 100.0 * static_cast<double>(counts[1]) / static_cast<double>(total);
    s.pct_guided = 100.0 * static_cast<double>(counts[2]) / static_cast<double>(total);
  }
  return s;
}

inline nlohmann::json summary_to_json(const RunSummary& s) {
  nlohmann::json j;
  j["schema"] = 1;
  j["horizon"] = s.horizon;
  j["agents"] = {{"pwds", s.pwds}, {"nurses", s.nurses}, {"watches", s.watches}};
  j["trips"] = {{"completed", s.trips_completed}, {"abandoned", s.trips_abandoned}};
  j["travel_efficiency"] = s.te ? nlohmann::json(*s.te) : nlohmann::json(nullptr);
  j["episodes"] = {
      {"count", s.episode_count},
      {"mean", s.episode_mean ? nlohmann::json(*s.episode_mean) : nlohmann::json(nullptr)},
      {"stddev",
       s.episode_stddev ? nlohmann::json(*s.episode_stddev) : nlohmann::json(nullptr)}};
  j["state_pct"] = {{"oriented", s.pct_oriented},
                    {"disoriented", s.pct_disoriented},
                    {"guided", s.pct_guided}};
  return j;
}

// --- sweeps ---

struct SweepPlan {
  std::vector<double> capacities;
  std::vector<std::string> modes;
  std::vector<std::uint64_t> seeds;
  int threads = 1;
};

struct SweepResult {
  double capacity = 0.0;
  std::string mode;
  std::uint64_t seed = 0;
  RunSummary summary;
};

// Runs every (capacity, mode, seed) replicate.  Results come back in plan
// order whatever the thread count; replicates are independent runs sharing
// only the immutable world.
inline std::vector<SweepResult> run_sweep(const Scenario& base, const World& world,
                                          const SweepPlan& plan) {
  struct Job {
    double capacity;
    std::string mode;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (double capacity : plan.capacities)
    for (const std::string& mode : plan.modes)
      for (std::uint64_t seed : plan.seeds) jobs.push_back({capacity, mode, seed});

  std::vector<SweepResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      Scenario rep = base;
      rep.seed = job.seed;
      apply_mode(rep, job.mode);
      for (PwdConfig& p : rep.pwds) p.capacity = job.capacity;
      Simulation sim(world, rep);
      sim.run();
      results[i] = {job.capacity, job.mode, job.seed, summarize_run(world, sim, rep.horizon)};
    }
  };
  const int threads = std::max(1, plan.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return results;
}

// Mean and standard error of the replicate statistics per (capacity, mode).
struct AggregateRow {
  double capacity = 0.0;
  std::string mode;
  int replicates = 0;
  std::optional<double> te_mean, te_se;
  double n_mean = 0.0, n_se = 0.0;
  std::optional<double> mu_mean, mu_se;
  std::optional<double> sigma_mean, sigma_se;
  double pct_oriented = 0.0, pct_disoriented = 0.0, pct_guided = 0.0;
};

namespace metrics_detail {

struct MeanSe {
  double mean = 0.0, se = 0.0;
  int n = 0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe out;
  out.n = static_cast<int>(xs.size());
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double var = 0.0;
    for (double x : xs) var += (x - out.mean) * (x - out.mean);
    var /= static_cast<double>(xs.size() - 1);
    out.se = std::sqrt(var / static_cast<double>(xs.size()));
  }
  return out;
}

}  // namespace metrics_detail

inline std::vector<AggregateRow> aggregate_sweep(const std::vector<SweepResult>& results) {
  using metrics_detail::mean_se;
  std::vector<AggregateRow> rows;
  for (const SweepResult& r : results) {
    AggregateRow* row = nullptr;
    for (AggregateRow& existing : rows)
      if (existing.capacity == r.capacity && existing.mode == r.mode) row = &existing;
    if (!row) {
      rows.push_back({});
      row = &rows.back();
      row->capacity = r.capacity;
      row->mode = r.mode;
    }
    ++row->replicates;
  }
  for (AggregateRow& row : rows) {
    std::vector<double> te, n, mu, sigma, po, pd, pg;
    for (const SweepResult& r : results) {
      if (r.capacity != row.capacity || r.mode != row.mode) continue;
      if (r.summary.te) te.push_back(*r.summary.te);
      n.push_back(static_cast<double>(r.summary.episode_count));
      if (r.summary.episode_mean) mu.push_back(*r.summary.episode_mean);
      if (r.summary.episode_stddev) sigma.push_back(*r.summary.episode_stddev);
      po.push_back(r.summary.pct_oriented);
      pd.push_back(r.summary.pct_disoriented);
      pg.push_back(r.summary.pct_guided);
    }
    if (const auto m = mean_se(te); m.n > 0) {
      row.te_mean = m.mean;
      row.te_se = m.se;
    }
    const auto mn = mean_se(n);
    row.n_mean = mn.mean;
    row.n_se = mn.se;
    if (const auto m = mean_se(mu); m.n > 0) {
      row.mu_mean = m.mean;
      row.mu_se = m.se;
    }
    if (const auto m = mean_se(sigma); m.n > 0) {
      row.sigma_mean = m.mean;
      row.sigma_se = m.se;
    }
    row.pct_oriented = mean_se(po).mean;
    row.pct_disoriented = mean_se(pd).mean;
    row.pct_guided = mean_se(pg).mean;
  }
  return rows;
}

// --- CSV and artifact writers ---

namespace metrics_detail {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

inline std::string num_or_na(const std::optional<double>& v) {
  return v ? num(*v) : std::string("n/a");
}

inline std::string short_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace metrics_detail

inline void write_replicates_csv(std::ostream& out, const std::vector<SweepResult>& results) {
  using namespace metrics_detail;
  out << "capacity,mode,seed,te,n,mu,sigma,pct_oriented,pct_disoriented,pct_guided\n";
  for (const SweepResult& r : results) {
    out << short_num(r.capacity) << ',' << r.mode << ',' << r.seed << ','
        << num_or_na(r.summary.te) << ',' << r.summary.episode_count << ','
        << num_or_na(r.summary.episode_mean) << ',' << num_or_na(r.summary.episode_stddev)
        << ',' << num(r.summary.pct_oriented) << ',' << num(r.summary.pct_disoriented)
        << ',' << num(r.summary.pct_guided) << '\n';
  }
}

inline void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  using namespace metrics_detail;
  out << "capacity,mode,replicates,te_mean,te_se,n_mean,n_se,mu_mean,mu_se,"
         "sigma_mean,sigma_se,pct_oriented,pct_disoriented,pct_guided\n";
  for (const AggregateRow& r : rows) {
    out << short_num(r.capacity) << ',' << r.mode << ',' << r.replicates << ','
        << num_or_na(r.te_mean) << ',' << num_or_na(r.te_se) << ',' << num(r.n_mean) << ','
        << num(r.n_se) << ',' << num_or_na(r.mu_mean) << ',' << num_or_na(r.mu_se) << ','
        << num_or_na(r.sigma_mean) << ',' << num_or_na(r.sigma_se) << ','
        << num(r.pct_oriented) << ',' << num(r.pct_disoriented) << ','
        << num(r.pct_guided) << '\n';
  }
}

inline void write_trajectory_csv(std::ostream& out,
                                 const std::vector<Simulation::TrajPoint>& points) {
  out << "tick,x,y,state\n";
  for (const Simulation::TrajPoint& pt : points)
    out << pt.tick << ',' << pt.x << ',' << pt.y << ',' << pt.state << '\n';
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Everything a run leaves behind.  File contents are a pure function of
// (scenario, seed): no timestamps, no machine names, keys in fixed order.
inline void write_run_artifacts(const std::filesystem::path& dir, const Scenario& sc,
                                const World& world, const Simulation& sim) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };

  {
    std::ofstream out = open("events.jsonl");
    write_events(out, sim.events());
  }
  const std::vector<std::string> ids = sim.embodied_ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::ofstream out = open("trajectory_" + ids[i] + ".csv");
    write_trajectory_csv(out, sim.trajectories()[i]);
  }
  {
    const RunSummary summary = summarize_run(world, sim, sc.horizon);
    std::ofstream out = open("summary.json");
    out << summary_to_json(summary).dump(2) << '\n';
  }
  {
    nlohmann::json manifest;
    manifest["format"] = "wardsim-run";
    manifest["schema"] = 1;
    manifest["events_schema"] = kEventSchemaVersion;
    manifest["seed"] = sc.seed;
    manifest["horizon"] = sc.horizon;
    manifest["map_hash"] = hash_hex(world.map.content_hash());
    manifest["scenario"] = sc.doc;
    std::ofstream out = open("manifest.json");
    out << manifest.dump(2) << '\n';
  }
}

inline void write_sweep_artifacts(const std::filesystem::path& dir, const Scenario& sc,
                                  const World& world, const SweepPlan& plan,
                                  const std::vector<SweepResult>& results) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "replicates.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / "replicates.csv").string());
    write_replicates_csv(out, results);
  }
  {
    std::ofstream out(dir / "aggregate.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / "aggregate.csv").string());
    write_aggregate_csv(out, aggregate_sweep(results));
  }
  {
    nlohmann::json manifest;
    manifest["format"] = "wardsim-sweep";
    manifest["schema"] = 1;
    manifest["capacities"] = plan.capacities;
    manifest["modes"] = plan.modes;
    manifest["seeds"] = plan.seeds;
    manifest["map_hash"] = hash_hex(world.map.content_hash());
    manifest["scenario"] = sc.doc;
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
  }
}

}  // namespace wardsim
