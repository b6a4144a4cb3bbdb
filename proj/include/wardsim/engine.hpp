#pragma once

// The tick loop.  Each step runs fixed phases in a fixed agent order, so a
// run is a pure function of (scenario, seed):
//
//   1. patients perceive and may reorient at a landmark
//   2. watches act (detect, intervene, remind, call for help)
//   3. nurses act (dispatch, pursue, guide) and move
//   4. patients arbitrate goals and move
//   5. needs grow / are serviced, memory decays
//   6. memory bound check
//
// Movement is single-occupancy: an agent whose target cell is taken simply
// waits; conflicts resolve by phase and agent order.  Trajectories sample
// the end-of-tick state.

#include <cassert>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "wardsim/agents.hpp"
#include "wardsim/cognition.hpp"
#include "wardsim/events.hpp"
#include "wardsim/geometry.hpp"
#include "wardsim/grid_map.hpp"
#include "wardsim/nav_graph.hpp"
#include "wardsim/path_table.hpp"
#include "wardsim/rng.hpp"
#include "wardsim/scenario.hpp"
#include "wardsim/visibility.hpp"

namespace wardsim {

// Map plus both path tables: `routes` steers agents under the scenario's
// discomfort factor, `metric` (lambda = 1) measures true shortest
// distances for the efficiency metric.  They coincide when lambda is 1.
struct World {
  GridMap map;
  PathTable routes;
  std::optional<PathTable> metric_storage;

  const PathTable& metric() const { return metric_storage ? *metric_storage : routes; }

  static World build(const Scenario& sc, const std::string& cache_dir = {},
                     bool* routes_cached = nullptr) {
    GridMap map = sc.load_map();
    const NavGraph nav(map, sc.lambda);
    PathTable routes = PathTable::load_or_compute(nav, cache_dir, sc.max_vertices,
                                                  routes_cached);
    std::optional<PathTable> metric;
    if (sc.lambda != 1.0) {
      const NavGraph plain(map, 1.0);
      metric = PathTable::load_or_compute(plain, cache_dir, sc.max_vertices);
    }
    return {std::move(map), std::move(routes), std::move(metric)};
  }
};

class Simulation {
 public:
  struct TrajPoint {
    Tick tick;
    int x, y;
    char state;
  };

  struct PwdRuntime {
    const PwdConfig* cfg;
    CellIndex pos;
    Offset facing = kFacingEast;
    PwdState state = PwdState::Oriented;
    CognitiveMap memory;
    std::vector<AppointmentState> appts;
    std::vector<NeedState> needs;
    Goal goal;
    bool trip_open = false;
    double traveled_m = 0.0;
    RandomStream rng;
    const char* reorient_cause = nullptr;  // per-tick scratch
  };

  struct NurseRuntime {
    const NurseConfig* cfg;
    CellIndex pos;
    Offset facing = kFacingEast;
    NurseState state = NurseState::Idle;
    int patient = -1;  // index into pwds_ while pursuing/guiding
  };

  struct WatchRuntime {
    const WatchConfig* cfg;
    int patient;  // index into pwds_
    WatchState state = WatchState::Monitoring;
    int counter = 0;        // failed navigation interventions in a row
    int cooldown_left = 0;
    RandomStream rng;
  };

  Simulation(const World& world, const Scenario& sc) : world_(world), sc_(sc) {
    std::vector<ScenarioIssue> issues = cross_check(sc, world.map);
    Placement placement = place_agents(sc, world.map);
    for (ScenarioIssue& i : placement.issues) issues.push_back(std::move(i));
    if (!issues.empty()) throw ScenarioError(std::move(issues));

    occupancy_.assign(world.map.size(), -1);
    for (std::size_t i = 0; i < sc.pwds.size(); ++i) {
      PwdRuntime p;
      p.cfg = &sc.pwds[i];
      p.pos = placement.pwd_cells[i];
      p.memory = CognitiveMap(world.map, p.cfg->capacity);
      p.appts.resize(p.cfg->schedule.size());
      p.needs.resize(p.cfg->needs.size());
      p.rng = agent_stream(sc.seed, p.cfg->id);
      seed_memory(p);
      pwds_.push_back(std::move(p));
      occupancy_[placement.pwd_cells[i]] = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < sc.nurses.size(); ++i) {
      NurseRuntime n;
      n.cfg = &sc.nurses[i];
      n.pos = placement.nurse_cells[i];
      nurses_.push_back(n);
      occupancy_[placement.nurse_cells[i]] = static_cast<int>(sc.pwds.size() + i);
    }
    for (const WatchConfig& cfg : sc.watches) {
      WatchRuntime w;
      w.cfg = &cfg;
      w.patient = pwd_index(cfg.patient);
      w.rng = agent_stream(sc.seed, cfg.id);
      watches_.push_back(std::move(w));
    }
    trajectories_.resize(pwds_.size() + nurses_.size());
  }

  Tick now() const { return tick_; }

  void step() {
    for (PwdRuntime& p : pwds_) p.reorient_cause = nullptr;
    phase_percept();
    phase_watches();
    phase_nurses();
    phase_pwds();
    phase_upkeep();
    for (const PwdRuntime& p : pwds_)
      assert(p.memory.size() <= p.memory.limit());
    record_trajectories();
    ++tick_;
  }

  void run() {
    while (tick_ < sc_.horizon) step();
  }

  const std::vector<SimEvent>& events() const { return events_; }

  // Embodied agents in trajectory order: patients first, then nurses.
  std::vector<std::string> embodied_ids() const {
    std::vector<std::string> ids;
    for (const PwdRuntime& p : pwds_) ids.push_back(p.cfg->id);
    for (const NurseRuntime& n : nurses_) ids.push_back(n.cfg->id);
    return ids;
  }

  const std::vector<std::vector<TrajPoint>>& trajectories() const { return trajectories_; }

  std::size_t pwd_count() const { return pwds_.size(); }
  std::size_t nurse_count() const { return nurses_.size(); }
  std::size_t watch_count() const { return watches_.size(); }
  const PwdRuntime& pwd(std::size_t i) const { return pwds_[i]; }
  const NurseRuntime& nurse(std::size_t i) const { return nurses_[i]; }
  const WatchRuntime& watch(std::size_t i) const { return watches_[i]; }

 private:
  // --- setup ---

  int pwd_index(const std::string& id) const {
    for (std::size_t i = 0; i < sc_.pwds.size(); ++i)
      if (sc_.pwds[i].id == id) return static_cast<int>(i);
    return -1;
  }

  // Initial knowledge: the capacity's worth of accessible cells closest to
  // the start position, stamped just before tick 0.  A full-capacity agent
  // therefore starts knowing the whole reachable ward.
  void seed_memory(PwdRuntime& p) {
    std::vector<std::pair<double, CellIndex>> order;
    for (CellIndex c : world_.map.accessible_cells()) {
      const double d = world_.routes.distance_meters(p.pos, c);
      if (d != PathTable::kUnreachable) order.emplace_back(d, c);
    }
    std::sort(order.begin(), order.end());
    std::vector<CellIndex> seed;
    for (std::size_t i = 0; i < order.size() && i < p.memory.limit(); ++i)
      seed.push_back(order[i].second);
    p.memory.memorize(world_.map, seed, -1);
  }

  // --- events ---

  void emit(const std::string& agent, EventKind kind, nlohmann::json data) {
    events_.push_back({tick_, agent, kind, std::move(data)});
  }

  nlohmann::json xy(CellIndex cell) const {
    const CellCoord c = world_.map.coord(cell);
    return nlohmann::json::array({c.x, c.y});
  }

  void set_pwd_state(PwdRuntime& p, PwdState to, const char* cause) {
    if (p.state == to) return;
    emit(p.cfg->id, EventKind::StateChanged,
         {{"from", pwd_state_name(p.state)}, {"to", pwd_state_name(to)}, {"cause", cause}});
    p.state = to;
  }

  void set_nurse_state(NurseRuntime& n, NurseState to, const char* cause) {
    if (n.state == to) return;
    emit(n.cfg->id, EventKind::StateChanged,
         {{"from", nurse_state_name(n.state)}, {"to", nurse_state_name(to)}, {"cause", cause}});
    n.state = to;
  }

  // --- movement ---

  int slot_of_pwd(const PwdRuntime& p) const {
    return static_cast<int>(&p - pwds_.data());
  }
  int slot_of_nurse(const NurseRuntime& n) const {
    return static_cast<int>(pwds_.size() + (&n - nurses_.data()));
  }

  bool cell_free(CellIndex c) const { return occupancy_[c] < 0; }

  void move_pwd(PwdRuntime& p, CellIndex to) {
    const CellIndex from = p.pos;
    occupancy_[from] = -1;
    occupancy_[to] = slot_of_pwd(p);
    p.facing = step_toward(world_.map.coord(from), world_.map.coord(to));
    p.pos = to;
    p.traveled_m += euclidean_meters(world_.map.coord(from), world_.map.coord(to));
    emit(p.cfg->id, EventKind::Moved, {{"from", xy(from)}, {"to", xy(to)}});
  }

  void move_nurse(NurseRuntime& n, CellIndex to) {
    const CellIndex from = n.pos;
    occupancy_[from] = -1;
    occupancy_[to] = slot_of_nurse(n);
    n.facing = step_toward(world_.map.coord(from), world_.map.coord(to));
    n.pos = to;
    emit(n.cfg->id, EventKind::Moved, {{"from", xy(from)}, {"to", xy(to)}});
  }

  // --- shared bits of patient logic ---

  bool at_goal(const PwdRuntime& p) const {
    const CellFeature& f = world_.map.feature(p.pos);
    return p.goal.kind != GoalKind::None && f.kind == FeatureKind::Location &&
           f.name == p.goal.location;
  }

  void close_trip_if_arrived(PwdRuntime& p) {
    if (!p.trip_open || !at_goal(p)) return;
    p.trip_open = false;
    emit(p.cfg->id, EventKind::GoalReached,
         {{"kind", goal_kind_name(p.goal.kind)}, {"location", p.goal.location},
          {"ref", p.goal.ref}, {"pos", xy(p.pos)}});
  }

  // Knowledge transfer: landmark recall, watch guidance and nurse guidance
  // all plant the cells of the goal location into working memory.
  void inject_goal_cells(PwdRuntime& p, const char* cause) {
    if (p.goal.kind == GoalKind::None) return;
    const auto cells = world_.map.location_cells(p.goal.location);
    p.memory.memorize(world_.map, cells, tick_);
    if (!p.reorient_cause) p.reorient_cause = cause;
  }

  // --- phase 1: perception ---

  void phase_percept() {
    for (PwdRuntime& p : pwds_) {
      const VisionParams vp{p.cfg->sight, p.cfg->fov_deg, p.facing};
      const std::vector<CellIndex> visible = visible_cells(world_.map, p.pos, vp);
      p.memory.memorize(world_.map, visible, tick_);
      if (p.state != PwdState::Disoriented) continue;
      bool landmark = false;
      for (CellIndex c : visible)
        if (world_.map.feature(c).kind == FeatureKind::Landmark) {
          landmark = true;
          break;
        }
      if (landmark && p.rng.bernoulli(p.cfg->p_landmarks))
        inject_goal_cells(p, "landmark");
    }
  }

  // --- phase 2: watches ---

  void phase_watches() {
    for (WatchRuntime& w : watches_) {
      PwdRuntime& p = pwds_[w.patient];
      if (p.state == PwdState::Oriented) {
        w.counter = 0;
        if (w.state == WatchState::Waiting) w.state = WatchState::Monitoring;
      }
      if (w.state == WatchState::Cooldown) {
        if (--w.cooldown_left <= 0) w.state = WatchState::Monitoring;
        continue;
      }
      if (w.state != WatchState::Monitoring) continue;

      // Navigation help first: notice disorientation (sensor roll), then
      // try to reorient (compliance roll).
      if (p.state == PwdState::Disoriented && p.goal.kind != GoalKind::None &&
          w.rng.bernoulli(w.cfg->sensor_model)) {
        const bool success = w.rng.bernoulli(p.cfg->p_interventions);
        emit(w.cfg->id, EventKind::Intervention,
             {{"kind", "navigate"}, {"patient", p.cfg->id}, {"success", success}});
        if (success) {
          inject_goal_cells(p, "watch");
          w.counter = 0;
        } else if (++w.counter > w.cfg->n_help) {
          emit(w.cfg->id, EventKind::Notification, {{"patient", p.cfg->id}});
          queue_notification(w.patient);
          w.state = WatchState::Waiting;
          continue;
        }
        start_cooldown(w);
        continue;
      }

      // Otherwise remind about a forgotten appointment whose window is on.
      for (std::size_t i = 0; i < p.cfg->schedule.size(); ++i) {
        if (!p.cfg->schedule[i].active(tick_) || !p.appts[i].forgotten) continue;
        const bool success = w.rng.bernoulli(p.cfg->p_interventions);
        emit(w.cfg->id, EventKind::Intervention,
             {{"kind", "remind"}, {"patient", p.cfg->id}, {"success", success}});
        if (success) p.appts[i].forgotten = false;
        start_cooldown(w);
        break;
      }
    }
  }

  void start_cooldown(WatchRuntime& w) {
    if (w.state != WatchState::Monitoring) return;
    if (w.cfg->cooldown > 0) {
      w.state = WatchState::Cooldown;
      w.cooldown_left = w.cfg->cooldown;
    }
  }

  void queue_notification(int patient) {
    for (int q : notifications_)
      if (q == patient) return;
    notifications_.push_back(patient);
  }

  // --- phase 3: nurses ---

  bool claimed(int patient) const {
    for (const NurseRuntime& n : nurses_)
      if (n.patient == patient) return true;
    return false;
  }

  void phase_nurses() {
    for (NurseRuntime& n : nurses_) {
      switch (n.state) {
        case NurseState::Idle: nurse_idle(n); break;
        case NurseState::Pursuing: nurse_pursue(n); break;
        case NurseState::Guiding: nurse_guide(n); break;
      }
    }
  }

  void nurse_idle(NurseRuntime& n) {
    // Queued help requests first, nearest first; drop entries that went
    // stale (patient reoriented or someone else took the case).
    int best = -1;
    double best_d = PathTable::kUnreachable;
    std::size_t best_q = 0;
    for (std::size_t q = 0; q < notifications_.size();) {
      const int cand = notifications_[q];
      if (pwds_[cand].state != PwdState::Disoriented || claimed(cand)) {
        notifications_.erase(notifications_.begin() + static_cast<std::ptrdiff_t>(q));
        continue;
      }
      const double d = world_.routes.distance_meters(n.pos, pwds_[cand].pos);
      if (d < best_d) {
        best_d = d;
        best = cand;
        best_q = q;
      }
      ++q;
    }
    if (best >= 0) {
      notifications_.erase(notifications_.begin() + static_cast<std::ptrdiff_t>(best_q));
      n.patient = best;
      set_nurse_state(n, NurseState::Pursuing, "notification");
      nurse_pursue(n);
      return;
    }

    // Else: any disoriented, unclaimed patient in sight.
    const VisionParams vp{n.cfg->sight, 360.0, n.facing};
    const std::vector<CellIndex> visible = visible_cells(world_.map, n.pos, vp);
    for (std::size_t i = 0; i < pwds_.size(); ++i) {
      const PwdRuntime& p = pwds_[i];
      if (p.state != PwdState::Disoriented || claimed(static_cast<int>(i))) continue;
      if (!std::binary_search(visible.begin(), visible.end(), p.pos)) continue;
      const double d = world_.routes.distance_meters(n.pos, p.pos);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0) {
      n.patient = best;
      set_nurse_state(n, NurseState::Pursuing, "sighted");
      nurse_pursue(n);
      return;
    }

    // Nothing to do: head back to the station.
    if (world_.map.feature(n.pos).kind == FeatureKind::Location &&
        world_.map.feature(n.pos).name == n.cfg->home)
      return;
    const CellIndex station = nearest_location_cell(world_.map, world_.routes, n.pos,
                                                    n.cfg->home);
    if (station == kInvalidCell) return;
    const CellIndex next = world_.routes.next_hop(n.pos, station);
    if (next != kInvalidCell && next != n.pos && cell_free(next)) move_nurse(n, next);
  }

  void nurse_pursue(NurseRuntime& n) {
    PwdRuntime& p = pwds_[n.patient];
    if (p.state != PwdState::Disoriented) {
      n.patient = -1;
      set_nurse_state(n, NurseState::Idle, "released");
      nurse_idle(n);
      return;
    }
    if (moore_adjacent(world_.map.coord(n.pos), world_.map.coord(p.pos))) {
      set_nurse_state(n, NurseState::Guiding, "adjacent");
      set_pwd_state(p, PwdState::Guided, "nurse");
      return;
    }
    const CellIndex next = world_.routes.next_hop(n.pos, p.pos);
    if (next != kInvalidCell && next != n.pos && cell_free(next)) move_nurse(n, next);
  }

  void nurse_guide(NurseRuntime& n) {
    PwdRuntime& p = pwds_[n.patient];
    if (guide_complete(n, p)) return;

    const CellIndex dest =
        nearest_location_cell(world_.map, world_.routes, n.pos, p.goal.location);
    if (dest == kInvalidCell) {
      // No reachable goal cell; hand the patient back to their own devices.
      n.patient = -1;
      set_nurse_state(n, NurseState::Idle, "released");
      set_pwd_state(p, PwdState::Disoriented, "nurse");
      return;
    }

    const CellIndex vacated = n.pos;
    if (n.pos == dest) {
      // The nurse stands on the goal cell itself; step aside so the
      // patient can take it.
      const CellIndex aside = free_neighbour(n.pos, p.pos);
      if (aside == kInvalidCell) return;
      move_nurse(n, aside);
      move_pwd(p, vacated);
    } else {
      const CellIndex next = world_.routes.next_hop(n.pos, dest);
      if (next == kInvalidCell || next == n.pos) return;
      if (next == p.pos) {
        // Path leads through the patient: exchange places.
        occupancy_[n.pos] = slot_of_pwd(p);
        occupancy_[p.pos] = slot_of_nurse(n);
        const CellIndex np = p.pos;
        n.facing = step_toward(world_.map.coord(n.pos), world_.map.coord(np));
        p.facing = step_toward(world_.map.coord(np), world_.map.coord(vacated));
        emit(n.cfg->id, EventKind::Moved, {{"from", xy(n.pos)}, {"to", xy(np)}});
        emit(p.cfg->id, EventKind::Moved, {{"from", xy(np)}, {"to", xy(vacated)}});
        p.traveled_m += euclidean_meters(world_.map.coord(np), world_.map.coord(vacated));
        n.pos = np;
        p.pos = vacated;
      } else if (cell_free(next)) {
        move_nurse(n, next);
        move_pwd(p, vacated);
      } else {
        return;  // blocked; both wait
      }
    }
    guide_complete(n, p);
  }

  // On the goal cell?  Then hand over the local knowledge and finish.
  bool guide_complete(NurseRuntime& n, PwdRuntime& p) {
    if (!at_goal(p)) return false;
    inject_goal_cells(p, "nurse");
    set_pwd_state(p, PwdState::Oriented, "nurse");
    close_trip_if_arrived(p);
    n.patient = -1;
    set_nurse_state(n, NurseState::Idle, "completed");
    return true;
  }

  CellIndex free_neighbour(CellIndex around, CellIndex avoid) const {
    const CellCoord c = world_.map.coord(around);
    CellIndex best = kInvalidCell;
    for (const Offset& o : kMooreOffsets) {
      const int nx = c.x + o.dx, ny = c.y + o.dy;
      if (!world_.map.contains(nx, ny)) continue;
      const CellIndex cell = world_.map.index(nx, ny);
      if (cell == avoid || !world_.map.accessible(cell) || !cell_free(cell)) continue;
      if (best == kInvalidCell || cell < best) best = cell;
    }
    return best;
  }

  // --- phase 4: patients ---

  void phase_pwds() {
    for (PwdRuntime& p : pwds_) {
      if (p.state == PwdState::Guided) continue;

      // One-time forget rolls for appointment windows that have opened.
      for (std::size_t i = 0; i < p.cfg->schedule.size(); ++i) {
        if (p.appts[i].forget_rolled || tick_ < p.cfg->schedule[i].start) continue;
        p.appts[i].forget_rolled = true;
        p.appts[i].forgotten = p.rng.bernoulli(p.cfg->p_forget_appointment);
      }

      const Goal goal = arbitrate_goal(p.cfg->schedule, p.appts, p.cfg->needs, p.needs,
                                       tick_, p.cfg->home);
      if (goal != p.goal) {
        p.goal = goal;
        p.trip_open = true;
        emit(p.cfg->id, EventKind::GoalAdopted,
             {{"kind", goal_kind_name(goal.kind)}, {"location", goal.location},
              {"ref", goal.ref}, {"pos", xy(p.pos)}});
      }

      if (p.memory.knows_location(p.goal.location)) {
        set_pwd_state(p, PwdState::Oriented,
                      p.reorient_cause ? p.reorient_cause : "perception");
        if (!at_goal(p)) {
          const CellIndex dest = nearest_location_cell(world_.map, world_.routes, p.pos,
                                                       p.goal.location);
          step_pwd_toward(p, dest);
        }
        close_trip_if_arrived(p);
      } else {
        set_pwd_state(p, PwdState::Disoriented, "memory");
        const CellIndex target =
            nearest_unknown_cell(world_.map, world_.routes, p.memory, p.pos);
        step_pwd_toward(p, target);
        close_trip_if_arrived(p);  // wandering can stumble onto the goal
      }
    }
  }

  void step_pwd_toward(PwdRuntime& p, CellIndex dest) {
    if (dest == kInvalidCell || dest == p.pos) return;
    const CellIndex next = world_.routes.next_hop(p.pos, dest);
    if (next == kInvalidCell || next == p.pos || !cell_free(next)) return;
    move_pwd(p, next);
  }

  // --- phase 5: needs and forgetting ---

  void phase_upkeep() {
    for (PwdRuntime& p : pwds_) {
      const CellFeature& here = world_.map.feature(p.pos);
      for (std::size_t i = 0; i < p.cfg->needs.size(); ++i)
        update_need(p.cfg->needs[i], p.needs[i], here);
      p.memory.forget_step(world_.map, p.cfg->p_forget_cell, p.rng);
    }
  }

  // --- bookkeeping ---

  void record_trajectories() {
    for (std::size_t i = 0; i < pwds_.size(); ++i) {
      const CellCoord c = world_.map.coord(pwds_[i].pos);
      trajectories_[i].push_back({tick_, c.x, c.y, pwd_state_letter(pwds_[i].state)});
    }
    for (std::size_t i = 0; i < nurses_.size(); ++i) {
      const CellCoord c = world_.map.coord(nurses_[i].pos);
      trajectories_[pwds_.size() + i].push_back(
          {tick_, c.x, c.y, nurse_state_letter(nurses_[i].state)});
    }
  }

  const World& world_;
  const Scenario& sc_;
  Tick tick_ = 0;
  std::vector<PwdRuntime> pwds_;
  std::vector<NurseRuntime> nurses_;
  std::vector<WatchRuntime> watches_;
  std::vector<int> occupancy_;  // cell -> embodied slot or -1
  std::deque<int> notifications_;
  std::vector<SimEvent> events_;
  std::vector<std::vector<TrajPoint>> trajectories_;
};

}  // namespace wardsim
