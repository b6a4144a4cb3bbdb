#pragma once

// Agent state vocabulary plus the small pure decision helpers the engine
// uses (exploration targets, goal cell selection).  The stateful step
// logic lives in engine.hpp, where all agents can see each other.

#include <cstdint>
#include <string>

#include "wardsim/cognition.hpp"
#include "wardsim/geometry.hpp"
#include "wardsim/grid_map.hpp"
#include "wardsim/path_table.hpp"

namespace wardsim {

enum class PwdState : std::uint8_t { Oriented, Disoriented, Guided };
enum class NurseState : std::uint8_t { Idle, Pursuing, Guiding };
enum class WatchState : std::uint8_t { Monitoring, Cooldown, Waiting };

inline const char* pwd_state_name(PwdState s) {
  switch (s) {
    case PwdState::Oriented: return "oriented";
    case PwdState::Disoriented: return "disoriented";
    case PwdState::Guided: return "guided";
  }
  return "?";
}

inline char pwd_state_letter(PwdState s) {
  switch (s) {
    case PwdState::Oriented: return 'O';
    case PwdState::Disoriented: return 'D';
    case PwdState::Guided: return 'G';
  }
  return '?';
}

inline const char* nurse_state_name(NurseState s) {
  switch (s) {
    case NurseState::Idle: return "idle";
    case NurseState::Pursuing: return "pursuing";
    case NurseState::Guiding: return "guiding";
  }
  return "?";
}

inline char nurse_state_letter(NurseState s) {
  switch (s) {
    case NurseState::Idle: return 'I';
    case NurseState::Pursuing: return 'P';
    case NurseState::Guiding: return 'G';
  }
  return '?';
}

// Closest cell of a named location, by routing distance from `from`; ties
// go to the lower cell index.  kInvalidCell when none is reachable.
inline CellIndex nearest_location_cell(const GridMap& map, const PathTable& routes,
                                       CellIndex from, const std::string& location) {
  CellIndex best = kInvalidCell;
  double best_d = PathTable::kUnreachable;
  for (CellIndex c : map.location_cells(location)) {
    const double d = routes.distance_meters(from, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

// Exploration target for a disoriented agent: the closest reachable
// accessible cell it does not remember (and is not standing on).  Ties go
// to the lower cell index; kInvalidCell when everything is remembered.
inline CellIndex nearest_unknown_cell(const GridMap& map, const PathTable& routes,
                                      const CognitiveMap& memory, CellIndex from) {
  CellIndex best = kInvalidCell;
  double best_d = PathTable::kUnreachable;
  for (CellIndex c : map.accessible_cells()) {
    if (c == from || memory.contains(c)) continue;
    const double d = routes.distance_meters(from, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace wardsim
