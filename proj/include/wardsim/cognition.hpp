#pragma once

// The impaired agent's inner state: a bounded working memory of cells, a
// list of physiological needs, and a daily appointment schedule, plus the
// arbitration rule that turns all of that into the current goal.
//
// Working memory holds accessible cells only -- walls are perceived but
// remembering them would spend capacity on knowledge no behaviour reads.
// The bound is ceil(C * accessible cells); when it overflows, the entries
// seen longest ago go first.  Ties within one tick resolve by write order
// (knowledge planted later in the tick -- a hint about the goal, say --
// outlives the ordinary percept), then by lower cell index.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wardsim/geometry.hpp"
#include "wardsim/grid_map.hpp"
#include "wardsim/rng.hpp"

namespace wardsim {

// Sentinel well below any real tick; initial knowledge is stamped with
// negative ticks so fresh percepts always outrank it on eviction.
inline constexpr Tick kNeverSeen = std::numeric_limits<Tick>::min();

class CognitiveMap {
 public:
  CognitiveMap() = default;

  CognitiveMap(const GridMap& map, double capacity_fraction)
      : last_seen_(map.size(), kNeverSeen),
        stamp_(map.size(), 0),
        limit_(static_cast<std::uint32_t>(
            std::ceil(capacity_fraction * map.accessible_count()))) {}

  std::uint32_t limit() const { return limit_; }
  std::uint32_t size() const { return count_; }

  bool contains(CellIndex cell) const { return last_seen_[cell] != kNeverSeen; }
  Tick last_seen(CellIndex cell) const { return last_seen_[cell]; }

  // Insert or refresh the given cells at time `now`, then evict down to the
  // limit.  Boundary cells in the batch are ignored.  Each call gets a
  // fresh write stamp: of two cells last seen the same tick, the one from
  // the later call is considered fresher.
  void memorize(const GridMap& map, std::span<const CellIndex> cells, Tick now) {
    ++next_stamp_;
    for (CellIndex c : cells) {
      if (!map.accessible(c)) continue;
      if (last_seen_[c] == kNeverSeen) {
        ++count_;
        const CellFeature& f = map.feature(c);
        if (f.kind == FeatureKind::Location) ++location_counts_[f.name];
      }
      last_seen_[c] = now;
      stamp_[c] = next_stamp_;
    }
    evict_to_limit(map);
  }

  // Independent forgetting: each remembered cell drops out with probability
  // p, decided in ascending cell order so the draw sequence is fixed.
  void forget_step(const GridMap& map, double p, RandomStream& rng) {
    if (p <= 0.0 || count_ == 0) return;
    for (CellIndex c = 0; c < last_seen_.size(); ++c) {
      if (last_seen_[c] == kNeverSeen) continue;
      if (rng.bernoulli(p)) erase(map, c);
    }
  }

  // True when at least one cell with this location name is remembered.
  bool knows_location(const std::string& name) const {
    auto it = location_counts_.find(name);
    return it != location_counts_.end() && it->second > 0;
  }

  // Remembered cells, ascending by index.
  std::vector<CellIndex> cells() const {
    std::vector<CellIndex> out;
    out.reserve(count_);
    for (CellIndex c = 0; c < last_seen_.size(); ++c)
      if (last_seen_[c] != kNeverSeen) out.push_back(c);
    return out;
  }

 private:
  void erase(const GridMap& map, CellIndex c) {
    last_seen_[c] = kNeverSeen;
    --count_;
    const CellFeature& f = map.feature(c);
    if (f.kind == FeatureKind::Location) --location_counts_[f.name];
  }

  void evict_to_limit(const GridMap& map) {
    if (count_ <= limit_) return;
    std::vector<std::pair<std::uint64_t, CellIndex>> order;
    order.reserve(count_);
    for (CellIndex c = 0; c < last_seen_.size(); ++c)
      if (last_seen_[c] != kNeverSeen) order.emplace_back(stamp_[c], c);
    std::sort(order.begin(), order.end());
    const std::uint32_t excess = count_ - limit_;
    for (std::uint32_t i = 0; i < excess; ++i) erase(map, order[i].second);
  }

  std::vector<Tick> last_seen_;
  std::vector<std::uint64_t> stamp_;
  std::map<std::string, std::uint32_t> location_counts_;
  std::uint32_t limit_ = 0;
  std::uint32_t count_ = 0;
  std::uint64_t next_stamp_ = 0;
};

// --- needs ---

struct NeedSpec {
  std::string name;            // "toilet", "social", ...
  double growth_rate = 0.0;    // level units per step
  double threshold = 1.0;      // level at which the need demands action
  std::string location;        // location feature that satisfies it
  int service_time = 0;        // consecutive steps to dwell there
};

struct NeedState {
  double level = 0.0;
  bool requested = false;
  int dwell = 0;  // consecutive steps spent at the satisfying location
};

// One step of need dynamics for an agent standing on `cell_feature`.
inline void update_need(const NeedSpec& spec, NeedState& st, const CellFeature& cell_feature) {
  st.level += spec.growth_rate;
  const bool at_location =
      cell_feature.kind == FeatureKind::Location && cell_feature.name == spec.location;
  st.dwell = at_location ? st.dwell + 1 : 0;
  if (at_location && st.dwell >= spec.service_time) {
    st.level = 0.0;
    st.dwell = 0;
  }
  st.requested = st.level >= spec.threshold;
}

// --- schedule ---

struct Appointment {
  Tick start = 0;          // step at which the window opens
  int duration = 0;        // window length in steps
  std::string location;    // location feature to attend

  Tick end() const { return start + duration; }
  bool active(Tick now) const { return now >= start && now < end(); }
};

struct AppointmentState {
  bool forget_rolled = false;  // the one-time forget draw has happened
  bool forgotten = false;      // cleared again by a watch reminder
};

// --- goal arbitration ---

enum class GoalKind : std::uint8_t { None, Appointment, Need, Home };

struct Goal {
  GoalKind kind = GoalKind::None;
  std::string location;  // location feature to reach
  int ref = -1;          // appointment / need list index, -1 for home

  friend bool operator==(const Goal&, const Goal&) = default;
};

inline const char* goal_kind_name(GoalKind k) {
  switch (k) {
    case GoalKind::None: return "none";
    case GoalKind::Appointment: return "appointment";
    case GoalKind::Need: return "need";
    case GoalKind::Home: return "home";
  }
  return "?";
}

// Priority: the active, unforgotten appointment; else the requested need
// with the highest level (first in list order on a tie); else home.
inline Goal arbitrate_goal(std::span<const Appointment> schedule,
                           std::span<const AppointmentState> appt_states,
                           std::span<const NeedSpec> needs,
                           std::span<const NeedState> need_states,
                           Tick now, const std::string& home_location) {
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i].active(now) && !appt_states[i].forgotten)
      return {GoalKind::Appointment, schedule[i].location, static_cast<int>(i)};
  }
  int best = -1;
  for (std::size_t i = 0; i < needs.size(); ++i) {
    if (!need_states[i].requested) continue;
    if (best < 0 || need_states[i].level > need_states[best].level)
      best = static_cast<int>(i);
  }
  if (best >= 0) return {GoalKind::Need, needs[best].location, best};
  return {GoalKind::Home, home_location, -1};
}

}  // namespace wardsim
