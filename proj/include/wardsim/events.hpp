#pragma once

// Structured simulation events and their JSONL wire format.  One JSON
// object per line; keys serialise in alphabetical order, so a run's log is
// reproducible byte for byte.

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "wardsim/geometry.hpp"

namespace wardsim {

inline constexpr int kEventSchemaVersion = 1;

enum class EventKind : std::uint8_t {
  Moved,         // data: from [x,y], to [x,y]
  StateChanged,  // data: from, to, cause
  GoalAdopted,   // data: kind, location, ref, pos [x,y]
  GoalReached,   // data: kind, location, ref, pos [x,y]
  Intervention,  // data: watch kind ("navigate"|"remind"), success
  Notification,  // data: patient id
};

inline const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::Moved: return "moved";
    case EventKind::StateChanged: return "state_changed";
    case EventKind::GoalAdopted: return "goal_adopted";
    case EventKind::GoalReached: return "goal_reached";
    case EventKind::Intervention: return "intervention";
    case EventKind::Notification: return "notification";
  }
  return "?";
}

struct SimEvent {
  Tick tick = 0;
  std::string agent;
  EventKind kind = EventKind::Moved;
  nlohmann::json data;
};

inline std::string event_to_line(const SimEvent& e) {
  const nlohmann::json j = {{"agent", e.agent},
                            {"data", e.data},
                            {"kind", event_kind_name(e.kind)},
                            {"tick", e.tick}};
  return j.dump();
}

inline EventKind event_kind_from_name(const std::string& name, const std::string& where) {
  for (int k = 0; k <= static_cast<int>(EventKind::Notification); ++k)
    if (name == event_kind_name(static_cast<EventKind>(k)))
      return static_cast<EventKind>(k);
  throw std::runtime_error(where + ": unknown event kind '" + name + "'");
}

inline SimEvent event_from_line(const std::string& line, std::size_t line_no) {
  const std::string where = "events line " + std::to_string(line_no);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& err) {
    throw std::runtime_error(where + ": " + err.what());
  }
  if (!j.is_object() || !j.contains("tick") || !j.contains("agent") ||
      !j.contains("kind") || !j.contains("data"))
    throw std::runtime_error(where + ": event must have tick, agent, kind, data");
  SimEvent e;
  e.tick = j["tick"].get<Tick>();
  e.agent = j["agent"].get<std::string>();
  e.kind = event_kind_from_name(j["kind"].get<std::string>(), where);
  e.data = j["data"];
  return e;
}

inline void write_events(std::ostream& out, const std::vector<SimEvent>& events) {
  for (const SimEvent& e : events) out << event_to_line(e) << '\n';
}

inline std::vector<SimEvent> read_events(std::istream& in) {
  std::vector<SimEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    events.push_back(event_from_line(line, line_no));
  }
  return events;
}

}  // namespace wardsim
