#pragma once

// Trajectory overlays: paint a recorded walk over the map image, coloured
// by the agent's state at each visit.  Later visits overdraw earlier ones.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wardsim/engine.hpp"
#include "wardsim/image.hpp"

namespace wardsim {

inline Rgb trajectory_colour(char state) {
  switch (state) {
    case 'O': return {30, 144, 255};   // oriented: blue
    case 'D': return {255, 45, 45};    // disoriented: red
    case 'G': return {255, 0, 255};    // guided / guiding: magenta
    case 'I': return {128, 128, 128};  // idle nurse: grey
    case 'P': return {255, 140, 60};   // pursuing nurse: orange
  }
  throw std::runtime_error(std::string("unknown trajectory state '") + state + "'");
}

inline std::vector<Simulation::TrajPoint> read_trajectory_csv(std::istream& in,
                                                              const std::string& name) {
  std::vector<Simulation::TrajPoint> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "tick,x,y,state")
        throw std::runtime_error(name + ": expected header 'tick,x,y,state'");
      continue;
    }
    if (line.empty()) continue;
    Simulation::TrajPoint pt;
    char state[8];
    long long tick;
    if (std::sscanf(line.c_str(), "%lld,%d,%d,%7s", &tick, &pt.x, &pt.y, state) != 4 ||
        state[1] != '\0')
      throw std::runtime_error(name + " line " + std::to_string(line_no) +
                               ": expected 'tick,x,y,state'");
    pt.tick = tick;
    pt.state = state[0];
    points.push_back(pt);
  }
  return points;
}

// Nearest-neighbour upscale; scale 1 returns a plain copy.
inline ImageRgb8 upscale(const ImageRgb8& src, int scale) {
  ImageRgb8 out(src.width() * scale, src.height() * scale);
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) out.set(x, y, src.at(x / scale, y / scale));
  return out;
}

// Draw the trajectory polyline over (an upscaled copy of) the map image.
// Consecutive points connect with a 1 px line; each segment takes the
// colour of the state at its destination point.
inline ImageRgb8 render_overlay(const ImageRgb8& map_image,
                                const std::vector<Simulation::TrajPoint>& points,
                                int scale = 1) {
  if (scale < 1) throw std::runtime_error("scale must be >= 1");
  ImageRgb8 out = upscale(map_image, scale);
  auto centre = [scale](int cell) { return cell * scale + scale / 2; };
  auto plot = [&](int x, int y, Rgb colour) {
    if (x < 0 || x >= out.width() || y < 0 || y >= out.height())
      throw std::runtime_error("trajectory point (" + std::to_string(x) + "," +
                               std::to_string(y) + ") is outside the map");
    out.set(x, y, colour);
  };
  auto line = [&](int x0, int y0, int x1, int y1, Rgb colour) {
    // Bresenham; endpoints included.
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    int x = x0, y = y0;
    while (true) {
      plot(x, y, colour);
      if (x == x1 && y == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
    }
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Rgb colour = trajectory_colour(points[i].state);
    if (i == 0) {
      plot(centre(points[i].x), centre(points[i].y), colour);
    } else {
      line(centre(points[i - 1].x), centre(points[i - 1].y), centre(points[i].x),
           centre(points[i].y), colour);
    }
  }
  return out;
}

}  // namespace wardsim
