#pragma once

// Independent visibility oracle.  Where the library walks rays with a
// supercover DDA and tests cones with a dot product, this oracle decides
// "does the centre-to-centre segment touch this cell's closed square" by
// exact rational Liang-Barsky clipping in doubled integer coordinates, and
// cones by atan2 angles.  Same question, disjoint arithmetic.

#include <cmath>
#include <cstdint>
#include <vector>

#include "wardsim/geometry.hpp"
#include "wardsim/grid_map.hpp"
#include "wardsim/visibility.hpp"

namespace test_support {

namespace oracle_detail {

// Nonnegative-denominator fraction; exact compare via cross-multiplication.
struct Frac {
  std::int64_t num, den;  // den > 0
};
inline bool frac_less(Frac a, Frac b) { return a.num * b.den < b.num * a.den; }

}  // namespace oracle_detail

// True when the segment between the centres of `a` and `b` touches the
// closed unit square of `cell`, corners included.  Works in doubled
// coordinates (centres odd, grid lines even) so everything stays integral.
inline bool segment_touches_cell(wardsim::CellCoord a, wardsim::CellCoord b,
                                 wardsim::CellCoord cell) {
  using oracle_detail::Frac;
  using oracle_detail::frac_less;
  const std::int64_t ax = 2ll * a.x + 1, ay = 2ll * a.y + 1;
  const std::int64_t bx = 2ll * b.x + 1, by = 2ll * b.y + 1;
  const std::int64_t dx = bx - ax, dy = by - ay;
  const std::int64_t xmin = 2ll * cell.x, xmax = xmin + 2;
  const std::int64_t ymin = 2ll * cell.y, ymax = ymin + 2;

  Frac lo{0, 1}, hi{1, 1};
  const std::int64_t p[4] = {-dx, dx, -dy, dy};
  const std::int64_t q[4] = {ax - xmin, xmax - ax, ay - ymin, ymax - ay};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0) {
      if (q[i] < 0) return false;  // parallel and outside the slab
      continue;
    }
    const Frac t = p[i] > 0 ? Frac{q[i], p[i]} : Frac{-q[i], -p[i]};
    if (p[i] > 0) {
      if (frac_less(t, hi)) hi = t;
    } else {
      if (frac_less(lo, t)) lo = t;
    }
  }
  return !frac_less(hi, lo);  // closed interval survives
}

// Inclusive cone test via angles, mirroring the library's tolerance intent.
inline bool oracle_within_fov(wardsim::Offset facing, int dx, int dy,
                              double fov_deg) {
  if (dx == 0 && dy == 0) return true;
  const double cross = static_cast<double>(facing.dx) * dy - static_cast<double>(facing.dy) * dx;
  const double dot = static_cast<double>(facing.dx) * dx + static_cast<double>(facing.dy) * dy;
  const double ang = std::abs(std::atan2(cross, dot));
  const double half = fov_deg * (3.14159265358979323846 / 360.0);
  return ang <= half + 1e-7;
}

inline bool oracle_visible(const wardsim::GridMap& map, wardsim::CellCoord from,
                           wardsim::CellCoord to, const wardsim::VisionParams& vp) {
  const int dx = to.x - from.x, dy = to.y - from.y;
  if (static_cast<std::int64_t>(dx) * dx + static_cast<std::int64_t>(dy) * dy >
      static_cast<std::int64_t>(vp.sight) * vp.sight)
    return false;
  if (!oracle_within_fov(vp.facing, dx, dy, vp.fov_deg)) return false;
  // Blocked when any wall cell other than the endpoints touches the segment.
  for (wardsim::CellIndex c = 0; c < map.size(); ++c) {
    if (map.feature(c).kind != wardsim::FeatureKind::Boundary) continue;
    const wardsim::CellCoord cc = map.coord(c);
    if (cc == to || cc == from) continue;
    if (segment_touches_cell(from, to, cc)) return false;
  }
  return true;
}

// The full visible set per the oracle, ascending by cell index.
inline std::vector<wardsim::CellIndex> oracle_visible_cells(
    const wardsim::GridMap& map, wardsim::CellIndex origin,
    const wardsim::VisionParams& vp) {
  std::vector<wardsim::CellIndex> out;
  const wardsim::CellCoord o = map.coord(origin);
  for (wardsim::CellIndex c = 0; c < map.size(); ++c)
    if (oracle_visible(map, o, map.coord(c), vp)) out.push_back(c);
  return out;
}

}  // namespace test_support
