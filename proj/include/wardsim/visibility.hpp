#pragma once

// Line of sight and fields of view.  A target cell is visible from an
// origin cell when it lies within sight range, inside the facing cone, and
// the straight segment between the two cell centres crosses no Boundary
// cell on the way (the target itself may be a wall -- walls can be seen).
//
// The ray walk is a supercover DDA done in integer arithmetic on doubled
// coordinates: cell centres become odd integer points, grid lines even
// ones, so "does the segment cross this corner exactly" has an exact
// answer and every cell the segment touches -- even only at a corner
// point -- is visited.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "wardsim/geometry.hpp"
#include "wardsim/grid_map.hpp"

namespace wardsim {

struct VisionParams {
  int sight = 5;            // radius in cells, centre to centre
  double fov_deg = 90.0;    // full cone angle; 360 sees all around
  Offset facing = kFacingEast;
};

// Visits, in walk order, every cell after `from` whose closed square the
// segment of centres touches, ending with `to`.  The visitor returns false
// to stop early.  Returns false when the walk was stopped.
template <typename Visitor>
bool walk_ray(CellCoord from, CellCoord to, Visitor&& visit) {
  const int dx = to.x - from.x, dy = to.y - from.y;
  const int sx = dx > 0 ? 1 : -1, sy = dy > 0 ? 1 : -1;

  if (dy == 0) {
    for (int x = from.x + sx; x != to.x + sx; x += sx)
      if (!visit(CellCoord{x, from.y})) return false;
    return true;
  }
  if (dx == 0) {
    for (int y = from.y + sy; y != to.y + sy; y += sy)
      if (!visit(CellCoord{from.x, y})) return false;
    return true;
  }

  // Progress towards the next vertical/horizontal grid line, measured in
  // doubled coordinates from the origin centre (2*from + 1).
  const std::int64_t den_x = 2 * std::abs(dx), den_y = 2 * std::abs(dy);
  CellCoord c = from;
  while (c.x != to.x || c.y != to.y) {
    const std::int64_t px =
        sx > 0 ? 2ll * (c.x + 1) - (2ll * from.x + 1) : (2ll * from.x + 1) - 2ll * c.x;
    const std::int64_t py =
        sy > 0 ? 2ll * (c.y + 1) - (2ll * from.y + 1) : (2ll * from.y + 1) - 2ll * c.y;
    const std::int64_t tx = px * den_y, ty = py * den_x;
    if (tx < ty) {
      c.x += sx;
      if (!visit(c)) return false;
    } else if (ty < tx) {
      c.y += sy;
      if (!visit(c)) return false;
    } else {
      // The segment passes exactly through a grid corner: it touches both
      // flanking cells at that point before entering the diagonal one.
      if (!visit(CellCoord{c.x + sx, c.y})) return false;
      if (!visit(CellCoord{c.x, c.y + sy})) return false;
      c.x += sx;
      c.y += sy;
      if (!visit(c)) return false;
    }
  }
  return true;
}

// Every cell the centre-to-centre segment touches, including both ends.
inline std::vector<CellCoord> ray_cells(CellCoord from, CellCoord to) {
  std::vector<CellCoord> cells{from};
  walk_ray(from, to, [&](CellCoord c) {
    cells.push_back(c);
    return true;
  });
  return cells;
}

inline bool line_of_sight(const GridMap& map, CellCoord from, CellCoord to) {
  return walk_ray(from, to, [&](CellCoord c) {
    if (c == to) return true;  // target blocks nobody, not even itself
    return map.feature(map.index(c)).kind != FeatureKind::Boundary;
  });
}

// Inclusive cone test with a hair of tolerance so that cells exactly on
// the cone edge count as seen.  The facing vector must be non-zero.
inline bool within_fov(Offset facing, int dx, int dy, double fov_deg) {
  if (dx == 0 && dy == 0) return true;
  const double dot = static_cast<double>(facing.dx) * dx + static_cast<double>(facing.dy) * dy;
  const double norms = std::sqrt(static_cast<double>(facing.dx) * facing.dx +
                                 static_cast<double>(facing.dy) * facing.dy) *
                       std::sqrt(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy);
  const double cos_half = std::cos(fov_deg * (3.14159265358979323846 / 360.0));
  return dot >= norms * cos_half - 1e-9;
}

// All cells visible from `origin`, ascending by cell index.  The origin is
// always part of the result: agents perceive the ground they stand on.
inline std::vector<CellIndex> visible_cells(const GridMap& map, CellIndex origin,
                                            const VisionParams& vp) {
  const CellCoord o = map.coord(origin);
  const std::int64_t r2 = static_cast<std::int64_t>(vp.sight) * vp.sight;
  std::vector<CellIndex> out;
  const int y0 = std::max(0, o.y - vp.sight), y1 = std::min(map.height() - 1, o.y + vp.sight);
  const int x0 = std::max(0, o.x - vp.sight), x1 = std::min(map.width() - 1, o.x + vp.sight);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const int dx = x - o.x, dy = y - o.y;
      if (static_cast<std::int64_t>(dx) * dx + static_cast<std::int64_t>(dy) * dy > r2)
        continue;
      if (!within_fov(vp.facing, dx, dy, vp.fov_deg)) continue;
      if (!line_of_sight(map, o, {x, y})) continue;
      out.push_back(map.index(x, y));
    }
  }
  return out;
}

}  // namespace wardsim
