#pragma once

// Navigation graph over the accessible cells of a map.  Moore moves, no
// squeezing diagonally between two walls, and a spatial-discomfort factor
// lambda that multiplies the cost of any edge touching a wall-hugging cell.
//
// Edge costs are kept exact: a path cost is a 4-vector of step counts
// (orthogonal/diagonal x plain/penalised) and only ever turned into metres
// by one fixed formula.  Integer step counts add exactly, so two shortest-
// path algorithms that agree on the vectors agree on the doubles bit for
// bit -- which is what makes the cached all-pairs table verifiable against
// an independent search.

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "wardsim/geometry.hpp"
#include "wardsim/grid_map.hpp"

namespace wardsim {

inline constexpr double kDefaultLambda = 1.5;

// Lambda is carried internally as an integer multiple of 1/256 so path
// costs compare exactly; 1.0, 1.5, 1.25, 2 ... are all representable.
inline int lambda_to_p256(double lambda) {
  if (!(lambda >= 1.0))
    throw std::runtime_error("lambda must be >= 1");
  const double scaled = lambda * 256.0;
  const long long p = std::llround(scaled);
  if (std::abs(scaled - static_cast<double>(p)) > 1e-9)
    throw std::runtime_error("lambda must be a multiple of 1/256 (e.g. 1.5)");
  return static_cast<int>(p);
}

// Step counts of a path, split by the four edge classes.
struct StepVec {
  std::uint32_t orth = 0;       // 0.5 m
  std::uint32_t diag = 0;       // 0.5 * sqrt(2) m
  std::uint32_t orth_pen = 0;   // lambda * 0.5 m
  std::uint32_t diag_pen = 0;   // lambda * 0.5 * sqrt(2) m

  friend StepVec operator+(StepVec a, StepVec b) {
    return {a.orth + b.orth, a.diag + b.diag,
            a.orth_pen + b.orth_pen, a.diag_pen + b.diag_pen};
  }
  friend bool operator==(const StepVec&, const StepVec&) = default;
};

// The one scalarisation used everywhere.  Fixed evaluation order; never
// inline ad-hoc arithmetic on step counts elsewhere.
inline double step_vec_meters(StepVec v, double lambda) {
  return kCellSideMeters * static_cast<double>(v.orth) +
         kDiagonalStepMeters * static_cast<double>(v.diag) +
         (lambda * kCellSideMeters) * static_cast<double>(v.orth_pen) +
         (lambda * kDiagonalStepMeters) * static_cast<double>(v.diag_pen);
}

// Exact three-way comparison of two path costs under lambda = p256/256.
// A cost is (s1 * 0.5 + s2 * 0.5*sqrt(2)) with integer s1, s2 in 1/256
// units, so the sign of the difference t + u*sqrt(2) is decidable in
// integer arithmetic.  Exact value ties fall back to a fixed lexicographic
// order on the step counts, which gives every vertex pair one canonical
// cheapest cost vector no matter which search algorithm found it.
inline int compare_step_vecs(StepVec a, StepVec b, int p256) {
  const std::int64_t t = 256ll * a.orth + std::int64_t{p256} * a.orth_pen -
                         256ll * b.orth - std::int64_t{p256} * b.orth_pen;
  const std::int64_t u = 256ll * a.diag + std::int64_t{p256} * a.diag_pen -
                         256ll * b.diag - std::int64_t{p256} * b.diag_pen;
  int sign = 0;
  if (t >= 0 && u >= 0) sign = (t > 0 || u > 0) ? 1 : 0;
  else if (t <= 0 && u <= 0) sign = -1;
  else {
    // Mixed signs: sign(t + u*sqrt(2)) follows from t^2 versus 2*u^2.
    // The two never tie here -- sqrt(2) is irrational.
    const __int128 tt = static_cast<__int128>(t) * t;
    const __int128 uu = 2 * static_cast<__int128>(u) * u;
    if (t > 0) sign = tt > uu ? 1 : -1;
    else sign = tt < uu ? 1 : -1;
  }
  if (sign != 0) return sign;
  const auto la = std::array<std::uint32_t, 4>{a.orth, a.diag, a.orth_pen, a.diag_pen};
  const auto lb = std::array<std::uint32_t, 4>{b.orth, b.diag, b.orth_pen, b.diag_pen};
  return la < lb ? -1 : (la > lb ? 1 : 0);
}

inline bool step_vec_less(StepVec a, StepVec b, int p256) {
  return compare_step_vecs(a, b, p256) < 0;
}

class NavGraph {
 public:
  struct Edge {
    std::uint32_t to;        // dense vertex id
    std::uint8_t diagonal;   // 0/1
    std::uint8_t penalised;  // 0/1
  };

  NavGraph(const GridMap& map, double lambda = kDefaultLambda)
      : lambda_(lambda), lambda_p256_(lambda_to_p256(lambda)) {
    vertex_cell_.assign(map.accessible_cells().begin(), map.accessible_cells().end());
    cell_vertex_.assign(map.size(), kInvalidCell);
    for (std::uint32_t v = 0; v < vertex_cell_.size(); ++v)
      cell_vertex_[vertex_cell_[v]] = v;

    edge_start_.reserve(vertex_cell_.size() + 1);
    for (std::uint32_t v = 0; v < vertex_cell_.size(); ++v) {
      edge_start_.push_back(static_cast<std::uint32_t>(edges_.size()));
      const CellIndex cell = vertex_cell_[v];
      const CellCoord c = map.coord(cell);
      for (const Offset& o : kMooreOffsets) {
        const int nx = c.x + o.dx, ny = c.y + o.dy;
        if (!map.contains(nx, ny)) continue;
        const CellIndex ncell = map.index(nx, ny);
        if (!map.accessible(ncell)) continue;
        const bool diagonal = o.dx != 0 && o.dy != 0;
        if (diagonal) {
          // No cutting corners: both orthogonal cells flanking the
          // diagonal must be free.
          if (!map.accessible(map.index(c.x + o.dx, c.y)) ||
              !map.accessible(map.index(c.x, c.y + o.dy)))
            continue;
        }
        const bool penalised = map.hugs_boundary(cell) || map.hugs_boundary(ncell);
        edges_.push_back({cell_vertex_[ncell],
                          static_cast<std::uint8_t>(diagonal),
                          static_cast<std::uint8_t>(penalised)});
      }
    }
    edge_start_.push_back(static_cast<std::uint32_t>(edges_.size()));

    map_hash_ = map.content_hash();
  }

  double lambda() const { return lambda_; }
  int lambda_p256() const { return lambda_p256_; }
  std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(vertex_cell_.size()); }

  CellIndex cell_of(std::uint32_t vertex) const { return vertex_cell_[vertex]; }

  // kInvalidCell-style sentinel: returns kInvalidVertex for Boundary cells.
  static constexpr std::uint32_t kInvalidVertex = 0xFFFFFFFFu;
  std::uint32_t vertex_of(CellIndex cell) const {
    const CellIndex v = cell_vertex_[cell];
    return v == kInvalidCell ? kInvalidVertex : static_cast<std::uint32_t>(v);
  }

  std::span<const Edge> edges_from(std::uint32_t vertex) const {
    return {edges_.data() + edge_start_[vertex],
            edges_.data() + edge_start_[vertex + 1]};
  }

  static StepVec edge_steps(const Edge& e) {
    StepVec v;
    if (e.diagonal) (e.penalised ? v.diag_pen : v.diag) = 1;
    else (e.penalised ? v.orth_pen : v.orth) = 1;
    return v;
  }

  double edge_meters(const Edge& e) const {
    return step_vec_meters(edge_steps(e), lambda_);
  }

  // Digest of (map, lambda); keys the on-disk path-table cache.
  std::uint64_t content_hash() const {
    std::uint64_t h = map_hash_;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 0x100000001B3ull;
    };
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(lambda_));
    __builtin_memcpy(&bits, &lambda_, sizeof(bits));
    mix(bits);
    mix(0x57415244ull);  // format discriminator
    return h;
  }

 private:
  double lambda_;
  int lambda_p256_;
  std::vector<CellIndex> vertex_cell_;   // dense id -> cell
  std::vector<CellIndex> cell_vertex_;   // cell -> dense id or kInvalidCell
  std::vector<std::uint32_t> edge_start_;
  std::vector<Edge> edges_;
  std::uint64_t map_hash_ = 0;
};

}  // namespace wardsim
