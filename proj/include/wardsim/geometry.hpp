#pragma once

// Basic grid geometry shared by every other header: cell coordinates,
// indices, the Moore neighbourhood and a couple of distance helpers.
// Cells are squares of 0.5 m; all distances reported to callers are metres.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace wardsim {

using CellIndex = std::uint32_t;
using Tick = std::int64_t;

inline constexpr CellIndex kInvalidCell = 0xFFFFFFFFu;
inline constexpr double kCellSideMeters = 0.5;
inline constexpr double kDiagonalStepMeters = 0.5 * 1.4142135623730951;

struct CellCoord {
  int x = 0;
  int y = 0;

  friend bool operator==(const CellCoord&, const CellCoord&) = default;
};

// One of the eight compass directions (or zero).  Also doubles as a facing
// vector for the field-of-view test.
struct Offset {
  int dx = 0;
  int dy = 0;

  friend bool operator==(const Offset&, const Offset&) = default;
};

// Orthogonal steps first, then diagonals.  Iteration order never decides
// ties anywhere (ties break on cell index), so this is just for reading.
inline constexpr std::array<Offset, 8> kMooreOffsets = {{
    {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

inline constexpr Offset kFacingEast{1, 0};

inline int chebyshev(CellCoord a, CellCoord b) {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  return dx > dy ? dx : dy;
}

inline bool moore_adjacent(CellCoord a, CellCoord b) {
  return a != b && chebyshev(a, b) <= 1;
}

// Straight-line distance between cell centres, in metres.
inline double euclidean_meters(CellCoord a, CellCoord b) {
  const double dx = static_cast<double>(a.x - b.x);
  const double dy = static_cast<double>(a.y - b.y);
  return kCellSideMeters * std::sqrt(dx * dx + dy * dy);
}

// Direction of a single grid step from a to b; both components in {-1,0,1}.
inline Offset step_toward(CellCoord a, CellCoord b) {
  auto sign = [](int v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
  return {sign(b.x - a.x), sign(b.y - a.y)};
}

}  // namespace wardsim
