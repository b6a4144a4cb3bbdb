#pragma once

// Scenario files: JSON documents that name a map image, give the palette
// decoding it, and configure every agent.  Parsing is strict -- unknown
// keys, bad ranges and dangling references are collected as issues with a
// dotted path to the offending field, which is what `wardsim validate`
// prints.
//
// The parsed document is kept verbatim on the Scenario; run manifests
// embed it so a run can be reproduced from its output directory alone.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "wardsim/cognition.hpp"
#include "wardsim/geometry.hpp"
#include "wardsim/grid_map.hpp"
#include "wardsim/image.hpp"
#include "wardsim/nav_graph.hpp"

namespace wardsim {

struct ScenarioIssue {
  std::string path;
  std::string message;
};

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(std::vector<ScenarioIssue> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<ScenarioIssue>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<ScenarioIssue>& issues) {
    std::string text = "invalid scenario:";
    for (const ScenarioIssue& i : issues) text += "\n  " + i.path + ": " + i.message;
    return text;
  }

  std::vector<ScenarioIssue> issues_;
};

struct PwdConfig {
  std::string id;
  std::string home;  // location name; also the fallback goal
  std::optional<CellCoord> start;
  double capacity = 1.0;
  double p_forget_cell = 0.0;
  double p_forget_appointment = 0.0;
  int sight = 5;
  double fov_deg = 90.0;
  double p_landmarks = 0.1;
  double p_interventions = 0.8;
  std::vector<Appointment> schedule;
  std::vector<NeedSpec> needs;
};

struct NurseConfig {
  std::string id;
  std::string home;  // location name of the station
  std::optional<CellCoord> start;
  int sight = 10;
};

struct WatchConfig {
  std::string id;
  std::string patient;  // pwd id it is strapped to
  int cooldown = 60;    // steps between interventions
  double sensor_model = 0.1;  // per-step probability of noticing disorientation
  int n_help = 3;       // failed interventions tolerated before calling a nurse
};

struct Scenario {
  nlohmann::json doc;  // normalised source document (overrides applied)
  std::filesystem::path base_dir;

  std::string map_file;  // as written in the document
  Palette palette;
  double lambda = kDefaultLambda;
  int step_seconds = 1;
  Tick horizon = 0;
  std::uint64_t seed = 0;
  int start_clock_s = 8 * 3600;
  std::uint32_t max_vertices = 5000;

  std::vector<PwdConfig> pwds;
  std::vector<NurseConfig> nurses;
  std::vector<WatchConfig> watches;

  std::filesystem::path map_path() const { return base_dir / map_file; }

  GridMap load_map() const {
    return GridMap::from_image(read_png_rgb8(map_path().string()), palette);
  }

  static Scenario from_json(nlohmann::json doc, std::filesystem::path base_dir);
  static Scenario load(const std::filesystem::path& file);
  static std::vector<ScenarioIssue> check(const nlohmann::json& doc);
};

// "HH:MM" or "HH:MM:SS" -> seconds since midnight.
inline std::optional<int> parse_clock(const std::string& text) {
  int h = 0, m = 0, s = 0, used = -1;
  if (std::sscanf(text.c_str(), "%d:%d:%d%n", &h, &m, &s, &used) == 3 &&
      used == static_cast<int>(text.size())) {
    // fall through to the range check
  } else {
    s = 0;
    used = -1;
    if (std::sscanf(text.c_str(), "%d:%d%n", &h, &m, &used) != 2 ||
        used != static_cast<int>(text.size()))
      return std::nullopt;
  }
  if (h < 0 || h > 23 || m < 0 || m > 59 || s < 0 || s > 59) return std::nullopt;
  return h * 3600 + m * 60 + s;
}

namespace scenario_detail {

using nlohmann::json;

struct Ctx {
  std::vector<ScenarioIssue>& issues;

  void add(const std::string& path, const std::string& message) {
    issues.push_back({path, message});
  }
};

inline void reject_unknown_keys(Ctx& ctx, const json& obj, const std::string& path,
                                const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items())
    if (!known.contains(key)) ctx.add(path + "." + key, "unknown key");
}

inline double get_number(Ctx& ctx, const json& obj, const std::string& path,
                         const std::string& key, double fallback, bool required = false) {
  if (!obj.contains(key)) {
    if (required) ctx.add(path + "." + key, "missing");
    return fallback;
  }
  if (!obj[key].is_number()) {
    ctx.add(path + "." + key, "must be a number");
    return fallback;
  }
  return obj[key].get<double>();
}

inline long long get_integer(Ctx& ctx, const json& obj, const std::string& path,
                             const std::string& key, long long fallback,
                             bool required = false) {
  if (!obj.contains(key)) {
    if (required) ctx.add(path + "." + key, "missing");
    return fallback;
  }
  if (!obj[key].is_number_integer()) {
    ctx.add(path + "." + key, "must be an integer");
    return fallback;
  }
  return obj[key].get<long long>();
}

inline std::string get_string(Ctx& ctx, const json& obj, const std::string& path,
                              const std::string& key, const std::string& fallback,
                              bool required = false) {
  if (!obj.contains(key)) {
    if (required) ctx.add(path + "." + key, "missing");
    return fallback;
  }
  if (!obj[key].is_string()) {
    ctx.add(path + "." + key, "must be a string");
    return fallback;
  }
  return obj[key].get<std::string>();
}

inline double get_probability(Ctx& ctx, const json& obj, const std::string& path,
                              const std::string& key, double fallback) {
  const double v = get_number(ctx, obj, path, key, fallback);
  if (v < 0.0 || v > 1.0) {
    ctx.add(path + "." + key, "must be in [0, 1]");
    return fallback;
  }
  return v;
}

inline std::optional<CellCoord> get_start(Ctx& ctx, const json& obj, const std::string& path) {
  if (!obj.contains("start")) return std::nullopt;
  const json& s = obj["start"];
  if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() ||
      !s[1].is_number_integer()) {
    ctx.add(path + ".start", "must be [x, y] with integer cell coordinates");
    return std::nullopt;
  }
  return CellCoord{s[0].get<int>(), s[1].get<int>()};
}

// Seconds -> whole steps; complains when the duration does not divide.
inline int to_steps(Ctx& ctx, const std::string& path, long long seconds, int step_seconds) {
  if (step_seconds <= 0) return static_cast<int>(seconds);
  if (seconds % step_seconds != 0)
    ctx.add(path, "not a whole number of steps (step_seconds = " +
                      std::to_string(step_seconds) + ")");
  return static_cast<int>(seconds / step_seconds);
}

inline void parse_palette(Ctx& ctx, const json& doc, Scenario& sc) {
  if (!doc.contains("palette") || !doc["palette"].is_object()) {
    ctx.add("palette", "missing or not an object");
    return;
  }
  for (const auto& [colour_text, entry] : doc["palette"].items()) {
    const std::string path = "palette." + colour_text;
    Rgb colour;
    try {
      colour = parse_hex_colour(colour_text);
    } catch (const std::exception& e) {
      ctx.add(path, e.what());
      continue;
    }
    if (!entry.is_object()) {
      ctx.add(path, "must be an object with a 'kind'");
      continue;
    }
    reject_unknown_keys(ctx, entry, path, {"kind", "name"});
    const std::string kind = get_string(ctx, entry, path, "kind", "", true);
    CellFeature feature;
    if (kind == "walkable") feature.kind = FeatureKind::Walkable;
    else if (kind == "boundary") feature.kind = FeatureKind::Boundary;
    else if (kind == "landmark") feature.kind = FeatureKind::Landmark;
    else if (kind == "location") feature.kind = FeatureKind::Location;
    else {
      if (!kind.empty())
        ctx.add(path + ".kind", "must be walkable, boundary, landmark or location");
      continue;
    }
    if (feature.kind == FeatureKind::Location) {
      feature.name = get_string(ctx, entry, path, "name", "", true);
      if (feature.name.empty()) continue;
    } else if (entry.contains("name")) {
      ctx.add(path + ".name", "only location entries take a name");
    }
    sc.palette.add(colour, feature);
  }
  if (sc.palette.size() == 0) ctx.add("palette", "no usable entries");
}

inline void parse_schedule(Ctx& ctx, const json& obj, const std::string& agent_path,
                           PwdConfig& cfg, const Scenario& sc) {
  if (!obj.contains("schedule")) return;
  if (!obj["schedule"].is_array()) {
    ctx.add(agent_path + ".schedule", "must be an array");
    return;
  }
  int idx = 0;
  for (const json& entry : obj["schedule"]) {
    const std::string path = agent_path + ".schedule[" + std::to_string(idx++) + "]";
    if (!entry.is_object()) {
      ctx.add(path, "must be an object");
      continue;
    }
    reject_unknown_keys(ctx, entry, path, {"at", "start", "duration", "location"});
    Appointment a;
    a.location = get_string(ctx, entry, path, "location", "", true);
    const long long duration_s = get_integer(ctx, entry, path, "duration", 0, true);
    if (duration_s <= 0) ctx.add(path + ".duration", "must be positive seconds");
    a.duration = to_steps(ctx, path + ".duration", std::max(0ll, duration_s), sc.step_seconds);
    if (entry.contains("at") == entry.contains("start")) {
      ctx.add(path, "needs exactly one of 'at' (clock) or 'start' (step)");
      continue;
    }
    if (entry.contains("at")) {
      const std::string at = get_string(ctx, entry, path, "at", "");
      const std::optional<int> clock = parse_clock(at);
      if (!clock) {
        ctx.add(path + ".at", "must be HH:MM or HH:MM:SS");
        continue;
      }
      if (*clock < sc.start_clock_s) {
        ctx.add(path + ".at", "before the scenario start clock");
        continue;
      }
      a.start = to_steps(ctx, path + ".at", *clock - sc.start_clock_s, sc.step_seconds);
    } else {
      a.start = get_integer(ctx, entry, path, "start", 0);
      if (a.start < 0) ctx.add(path + ".start", "must be >= 0");
    }
    cfg.schedule.push_back(a);
  }
  for (std::size_t i = 1; i < cfg.schedule.size(); ++i) {
    if (cfg.schedule[i].start < cfg.schedule[i - 1].end())
      ctx.add(agent_path + ".schedule",
              "appointments must be sorted by start and must not overlap");
  }
}

inline void parse_needs(Ctx& ctx, const json& obj, const std::string& agent_path,
                        PwdConfig& cfg, const Scenario& sc) {
  if (!obj.contains("needs")) return;
  if (!obj["needs"].is_array()) {
    ctx.add(agent_path + ".needs", "must be an array");
    return;
  }
  int idx = 0;
  for (const json& entry : obj["needs"]) {
    const std::string path = agent_path + ".needs[" + std::to_string(idx++) + "]";
    if (!entry.is_object()) {
      ctx.add(path, "must be an object");
      continue;
    }
    reject_unknown_keys(ctx, entry, path,
                        {"name", "growth_rate", "threshold", "location", "service_time"});
    NeedSpec n;
    n.name = get_string(ctx, entry, path, "name", "", true);
    n.location = get_string(ctx, entry, path, "location", "", true);
    n.growth_rate = get_number(ctx, entry, path, "growth_rate", 0.0, true) * sc.step_seconds;
    if (n.growth_rate < 0) ctx.add(path + ".growth_rate", "must be >= 0");
    n.threshold = get_number(ctx, entry, path, "threshold", 1.0);
    if (n.threshold <= 0) ctx.add(path + ".threshold", "must be positive");
    const long long service_s = get_integer(ctx, entry, path, "service_time", 0, true);
    if (service_s < 0) ctx.add(path + ".service_time", "must be >= 0 seconds");
    n.service_time = to_steps(ctx, path + ".service_time", std::max(0ll, service_s),
                              sc.step_seconds);
    cfg.needs.push_back(n);
  }
}

inline void parse_agents(Ctx& ctx, const json& doc, Scenario& sc) {
  if (!doc.contains("agents")) return;
  if (!doc["agents"].is_array()) {
    ctx.add("agents", "must be an array");
    return;
  }
  std::set<std::string> ids;
  std::set<std::string> watched;
  int idx = -1;
  for (const json& entry : doc["agents"]) {
    ++idx;
    const std::string path = "agents[" + std::to_string(idx) + "]";
    if (!entry.is_object()) {
      ctx.add(path, "must be an object");
      continue;
    }
    const std::string type = get_string(ctx, entry, path, "type", "", true);
    const std::string id = get_string(ctx, entry, path, "id", "", true);
    if (id.empty()) continue;
    if (!ids.insert(id).second) {
      ctx.add(path + ".id", "duplicate agent id '" + id + "'");
      continue;
    }
    if (type == "pwd") {
      reject_unknown_keys(ctx, entry, path,
                          {"type", "id", "home", "start", "capacity", "p_forget_cell",
                           "p_forget_appointment", "sight", "fov", "p_landmarks",
                           "p_interventions", "schedule", "needs"});
      PwdConfig cfg;
      cfg.id = id;
      cfg.home = get_string(ctx, entry, path, "home", "", true);
      cfg.start = get_start(ctx, entry, path);
      cfg.capacity = get_probability(ctx, entry, path, "capacity", cfg.capacity);
      cfg.p_forget_cell = get_probability(ctx, entry, path, "p_forget_cell", cfg.p_forget_cell);
      cfg.p_forget_appointment =
          get_probability(ctx, entry, path, "p_forget_appointment", cfg.p_forget_appointment);
      cfg.p_landmarks = get_probability(ctx, entry, path, "p_landmarks", cfg.p_landmarks);
      cfg.p_interventions =
          get_probability(ctx, entry, path, "p_interventions", cfg.p_interventions);
      cfg.sight = static_cast<int>(get_integer(ctx, entry, path, "sight", cfg.sight));
      if (cfg.sight < 0) ctx.add(path + ".sight", "must be >= 0 cells");
      cfg.fov_deg = get_number(ctx, entry, path, "fov", cfg.fov_deg);
      if (cfg.fov_deg <= 0 || cfg.fov_deg > 360)
        ctx.add(path + ".fov", "must be in (0, 360] degrees");
      parse_schedule(ctx, entry, path, cfg, sc);
      parse_needs(ctx, entry, path, cfg, sc);
      sc.pwds.push_back(std::move(cfg));
    } else if (type == "nurse") {
      reject_unknown_keys(ctx, entry, path, {"type", "id", "home", "start", "sight"});
      NurseConfig cfg;
      cfg.id = id;
      cfg.home = get_string(ctx, entry, path, "home", "", true);
      cfg.start = get_start(ctx, entry, path);
      cfg.sight = static_cast<int>(get_integer(ctx, entry, path, "sight", cfg.sight));
      if (cfg.sight < 0) ctx.add(path + ".sight", "must be >= 0 cells");
      sc.nurses.push_back(std::move(cfg));
    } else if (type == "watch") {
      reject_unknown_keys(ctx, entry, path,
                          {"type", "id", "patient", "cooldown", "sensor_model", "n_help"});
      WatchConfig cfg;
      cfg.id = id;
      cfg.patient = get_string(ctx, entry, path, "patient", "", true);
      if (cfg.patient.empty() && entry.contains("patient"))
        ctx.add(path + ".patient", "must name a pwd agent");
      if (!cfg.patient.empty() && !watched.insert(cfg.patient).second)
        ctx.add(path + ".patient", "patient '" + cfg.patient + "' already has a watch");
      const long long cooldown_s = get_integer(ctx, entry, path, "cooldown", 60, false);
      if (cooldown_s < 0) ctx.add(path + ".cooldown", "must be >= 0 seconds");
      cfg.cooldown = to_steps(ctx, path + ".cooldown", std::max(0ll, cooldown_s),
                              sc.step_seconds);
      cfg.sensor_model = get_probability(ctx, entry, path, "sensor_model", cfg.sensor_model);
      cfg.n_help = static_cast<int>(get_integer(ctx, entry, path, "n_help", cfg.n_help));
      if (cfg.n_help < 0) ctx.add(path + ".n_help", "must be >= 0");
      sc.watches.push_back(std::move(cfg));
    } else if (!type.empty()) {
      ctx.add(path + ".type", "must be pwd, nurse or watch");
    }
  }
  for (std::size_t w = 0; w < sc.watches.size(); ++w) {
    const std::string& patient = sc.watches[w].patient;
    const bool found = std::any_of(sc.pwds.begin(), sc.pwds.end(),
                                   [&](const PwdConfig& p) { return p.id == patient; });
    if (!patient.empty() && !found)
      ctx.add("agents", "watch '" + sc.watches[w].id + "' references unknown patient '" +
                            patient + "'");
  }
}

inline void parse_scenario(Ctx& ctx, const json& doc, Scenario& sc) {
  if (!doc.is_object()) {
    ctx.add("$", "scenario must be a JSON object");
    return;
  }
  reject_unknown_keys(ctx, doc, "$",
                      {"map", "palette", "lambda", "step_seconds", "horizon", "seed",
                       "start_clock", "max_vertices", "agents"});

  sc.map_file = get_string(ctx, doc, "$", "map", "", true);
  sc.step_seconds = static_cast<int>(get_integer(ctx, doc, "$", "step_seconds", 1));
  if (sc.step_seconds < 1) {
    ctx.add("$.step_seconds", "must be >= 1");
    sc.step_seconds = 1;
  }
  sc.horizon = get_integer(ctx, doc, "$", "horizon", 0, true);
  if (sc.horizon < 1) ctx.add("$.horizon", "must be >= 1 steps");
  const long long seed = get_integer(ctx, doc, "$", "seed", 0);
  sc.seed = static_cast<std::uint64_t>(seed);
  sc.lambda = get_number(ctx, doc, "$", "lambda", kDefaultLambda);
  try {
    lambda_to_p256(sc.lambda);
  } catch (const std::exception& e) {
    ctx.add("$.lambda", e.what());
    sc.lambda = kDefaultLambda;
  }
  const std::string clock = get_string(ctx, doc, "$", "start_clock", "08:00");
  if (const auto secs = parse_clock(clock)) sc.start_clock_s = *secs;
  else ctx.add("$.start_clock", "must be HH:MM or HH:MM:SS");
  const long long maxv = get_integer(ctx, doc, "$", "max_vertices", 5000);
  if (maxv < 1) ctx.add("$.max_vertices", "must be >= 1");
  else sc.max_vertices = static_cast<std::uint32_t>(maxv);

  parse_palette(ctx, doc, sc);
  parse_agents(ctx, doc, sc);
}

}  // namespace scenario_detail

inline Scenario Scenario::from_json(nlohmann::json doc, std::filesystem::path base_dir) {
  std::vector<ScenarioIssue> issues;
  scenario_detail::Ctx ctx{issues};
  Scenario sc;
  sc.doc = std::move(doc);
  sc.base_dir = std::move(base_dir);
  scenario_detail::parse_scenario(ctx, sc.doc, sc);
  if (!issues.empty()) throw ScenarioError(std::move(issues));
  return sc;
}

inline Scenario Scenario::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open scenario '" + file.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("scenario '" + file.string() + "': " + e.what());
  }
  return from_json(std::move(doc), file.parent_path());
}

inline std::vector<ScenarioIssue> Scenario::check(const nlohmann::json& doc) {
  std::vector<ScenarioIssue> issues;
  scenario_detail::Ctx ctx{issues};
  Scenario sc;
  sc.doc = doc;
  scenario_detail::parse_scenario(ctx, sc.doc, sc);
  return issues;
}

// Checks that need the decoded map: location references and agent placement.
inline std::vector<ScenarioIssue> cross_check(const Scenario& sc, const GridMap& map) {
  std::vector<ScenarioIssue> issues;
  auto require_location = [&](const std::string& path, const std::string& name) {
    if (!name.empty() && !map.has_location(name))
      issues.push_back({path, "location '" + name + "' does not exist on the map"});
  };
  for (std::size_t i = 0; i < sc.pwds.size(); ++i) {
    const PwdConfig& p = sc.pwds[i];
    const std::string path = "pwd " + p.id;
    require_location(path + ".home", p.home);
    for (const Appointment& a : p.schedule) require_location(path + ".schedule", a.location);
    for (const NeedSpec& n : p.needs) require_location(path + ".needs", n.location);
  }
  for (const NurseConfig& n : sc.nurses)
    require_location("nurse " + n.id + ".home", n.home);
  return issues;
}

// Deterministic placement: explicit starts are taken as given, everyone
// else gets the lowest-index free cell of their home location, patients
// before nurses in document order.  Issues instead of positions on any
// conflict.
struct Placement {
  std::vector<CellIndex> pwd_cells;
  std::vector<CellIndex> nurse_cells;
  std::vector<ScenarioIssue> issues;
};

inline Placement place_agents(const Scenario& sc, const GridMap& map) {
  Placement out;
  std::set<CellIndex> taken;
  auto place = [&](const std::string& who, const std::optional<CellCoord>& start,
                   const std::string& home) -> CellIndex {
    if (start) {
      if (!map.contains(start->x, start->y)) {
        out.issues.push_back({who + ".start", "outside the map"});
        return kInvalidCell;
      }
      const CellIndex cell = map.index(*start);
      if (!map.accessible(cell)) {
        out.issues.push_back({who + ".start", "is a boundary cell"});
        return kInvalidCell;
      }
      if (!taken.insert(cell).second) {
        out.issues.push_back({who + ".start", "already occupied"});
        return kInvalidCell;
      }
      return cell;
    }
    for (CellIndex cell : map.location_cells(home))
      if (taken.insert(cell).second) return cell;
    out.issues.push_back({who + ".home", "no free cell at location '" + home + "'"});
    return kInvalidCell;
  };
  for (const PwdConfig& p : sc.pwds)
    out.pwd_cells.push_back(place("pwd " + p.id, p.start, p.home));
  for (const NurseConfig& n : sc.nurses)
    out.nurse_cells.push_back(place("nurse " + n.id, n.start, n.home));
  return out;
}

// Strips assistance according to the sweep mode: "none" removes nurses and
// watches, "nurse" removes watches, "nurse+watch" keeps everything.
inline void apply_mode(Scenario& sc, const std::string& mode) {
  if (mode == "none") {
    sc.nurses.clear();
    sc.watches.clear();
  } else if (mode == "nurse") {
    sc.watches.clear();
  } else if (mode != "nurse+watch") {
    throw std::runtime_error("unknown mode '" + mode + "' (none, nurse, nurse+watch)");
  }
}

// --override key=value.  The first path token may be an agent type (pwd,
// nurse, watch: applied to all agents of that type) or an agent id;
// anything else navigates from the document root.  Values parse as JSON
// when they can and fall back to plain strings.
inline void apply_override(nlohmann::json& doc, const std::string& text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::runtime_error("override must look like key=value: '" + text + "'");
  const std::string key = text.substr(0, eq);
  const std::string value_text = text.substr(eq + 1);
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(value_text);
  } catch (const nlohmann::json::parse_error&) {
    value = value_text;
  }

  std::vector<std::string> tokens;
  std::size_t from = 0;
  while (true) {
    const std::size_t dot = key.find('.', from);
    tokens.push_back(key.substr(from, dot == std::string::npos ? dot : dot - from));
    if (dot == std::string::npos) break;
    from = dot + 1;
  }
  for (const std::string& t : tokens)
    if (t.empty()) throw std::runtime_error("override has an empty path segment: '" + key + "'");

  auto set_path = [&](nlohmann::json& root, std::size_t first_token) {
    nlohmann::json* node = &root;
    for (std::size_t i = first_token; i + 1 < tokens.size(); ++i) {
      if (!node->is_object() || !node->contains(tokens[i]))
        throw std::runtime_error("override path '" + key + "' does not exist");
      node = &(*node)[tokens[i]];
    }
    if (!node->is_object())
      throw std::runtime_error("override path '" + key + "' does not reach an object");
    (*node)[tokens.back()] = value;
  };

  const std::string& head = tokens[0];
  const bool is_type = head == "pwd" || head == "nurse" || head == "watch";
  if ((is_type || tokens.size() > 1) && doc.contains("agents") && doc["agents"].is_array()) {
    int hits = 0;
    for (nlohmann::json& agent : doc["agents"]) {
      if (!agent.is_object()) continue;
      const bool match = is_type ? (agent.value("type", "") == head)
                                 : (agent.value("id", "") == head);
      if (!match) continue;
      if (tokens.size() < 2)
        throw std::runtime_error("override '" + key + "' needs a field after the agent");
      set_path(agent, 1);
      ++hits;
    }
    if (is_type) {
      if (hits == 0)
        throw std::runtime_error("override '" + key + "' matched no " + head + " agent");
      return;
    }
    if (hits > 0) return;
  }
  set_path(doc, 0);
}

}  // namespace wardsim
