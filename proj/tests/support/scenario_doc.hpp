#pragma once

// Scenario-document fixtures: a complete, valid base document plus helpers
// to write it (and its map image) into a temp directory.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "support/ascii_map.hpp"
#include "wardsim/image.hpp"

namespace test_support {

inline nlohmann::json base_doc(long long horizon = 200, long long seed = 1) {
  return nlohmann::json{
      {"map", "map.png"},
      {"palette", ascii_palette_json()},
      {"lambda", 1.5},
      {"step_seconds", 1},
      {"horizon", horizon},
      {"seed", seed},
      {"start_clock", "08:00"},
      {"agents", nlohmann::json::array()},
  };
}

inline nlohmann::json pwd_json(const std::string& id, const std::string& home) {
  return nlohmann::json{{"type", "pwd"}, {"id", id}, {"home", home}};
}

inline nlohmann::json nurse_json(const std::string& id, const std::string& home) {
  return nlohmann::json{{"type", "nurse"}, {"id", id}, {"home", home}};
}

inline nlohmann::json watch_json(const std::string& id, const std::string& patient) {
  return nlohmann::json{{"type", "watch"}, {"id", id}, {"patient", patient}};
}

// Writes map.png and scenario.json into `dir`; returns the scenario path.
inline std::filesystem::path write_scenario(const std::filesystem::path& dir,
                                            const std::vector<std::string>& rows,
                                            const nlohmann::json& doc) {
  wardsim::write_png_rgb8(dir / "map.png", ascii_image(rows));
  const std::filesystem::path file = dir / "scenario.json";
  std::ofstream out(file);
  out << doc.dump(2) << '\n';
  return file;
}

}  // namespace test_support
