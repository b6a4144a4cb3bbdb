#pragma once

// All-pairs shortest paths over a NavGraph, computed once per (map, lambda)
// with Floyd-Warshall and persisted to a binary cache keyed by the graph's
// content hash.  Relaxation compares exact step-count vectors, so the table
// holds the one canonical cheapest cost per pair; the doubles it serves are
// scalarised from those vectors and reproducible bit for bit.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wardsim/geometry.hpp"
#include "wardsim/nav_graph.hpp"

namespace wardsim {

class PathTable {
 public:
  static constexpr double kUnreachable = std::numeric_limits<double>::infinity();
  static constexpr std::uint32_t kDefaultMaxVertices = 5000;

  static PathTable compute(const NavGraph& graph,
                           std::uint32_t max_vertices = kDefaultMaxVertices) {
    const std::uint32_t n = graph.vertex_count();
    if (n > max_vertices)
      throw std::runtime_error(
          "navigation graph has " + std::to_string(n) + " vertices, above the limit of " +
          std::to_string(max_vertices) + "; shrink the map or raise max_vertices");

    PathTable t;
    t.hash_ = graph.content_hash();
    t.lambda_ = graph.lambda();
    t.n_ = n;
    t.vertex_cell_.resize(n);
    for (std::uint32_t v = 0; v < n; ++v) t.vertex_cell_[v] = graph.cell_of(v);
    t.dist_.assign(static_cast<std::size_t>(n) * n, kUnreachable);
    t.succ_.assign(static_cast<std::size_t>(n) * n, -1);

    const int p256 = graph.lambda_p256();
    std::vector<StepVec> vec(static_cast<std::size_t>(n) * n);
    std::vector<std::uint8_t> reach(static_cast<std::size_t>(n) * n, 0);
    auto at = [n](std::uint32_t i, std::uint32_t j) {
      return static_cast<std::size_t>(i) * n + j;
    };

    for (std::uint32_t v = 0; v < n; ++v) {
      reach[at(v, v)] = 1;
      t.dist_[at(v, v)] = 0.0;
      t.succ_[at(v, v)] = static_cast<std::int32_t>(v);
      for (const NavGraph::Edge& e : graph.edges_from(v)) {
        const StepVec sv = NavGraph::edge_steps(e);
        const std::size_t k = at(v, e.to);
        if (!reach[k] || step_vec_less(sv, vec[k], p256)) {
          reach[k] = 1;
          vec[k] = sv;
          t.dist_[k] = step_vec_meters(sv, t.lambda_);
          t.succ_[k] = static_cast<std::int32_t>(e.to);
        }
      }
    }

    // Classic triple loop.  The cheap double comparison filters out the
    // vast majority of non-improving candidates; the exact vector
    // comparison only runs near ties.  The slack is far above the rounding
    // error of scalarisation, so no genuinely better candidate is skipped.
    constexpr double kSlack = 1e-9;
    for (std::uint32_t k = 0; k < n; ++k) {
      const std::size_t krow = static_cast<std::size_t>(k) * n;
      for (std::uint32_t i = 0; i < n; ++i) {
        const std::size_t ik = at(i, k);
        if (!reach[ik]) continue;
        const double dik = t.dist_[ik];
        const StepVec vik = vec[ik];
        const std::int32_t sik = t.succ_[ik];
        const std::size_t irow = static_cast<std::size_t>(i) * n;
        for (std::uint32_t j = 0; j < n; ++j) {
          if (!reach[krow + j]) continue;
          const std::size_t ij = irow + j;
          if (reach[ij] && dik + t.dist_[krow + j] > t.dist_[ij] + kSlack) continue;
          const StepVec cand = vik + vec[krow + j];
          if (!reach[ij] || step_vec_less(cand, vec[ij], p256)) {
            reach[ij] = 1;
            vec[ij] = cand;
            t.dist_[ij] = step_vec_meters(cand, t.lambda_);
            t.succ_[ij] = sik;
          }
        }
      }
    }

    t.build_cell_index();
    return t;
  }

  // --- queries (all in cell indices of the originating map) ---

  double distance_meters(CellIndex from, CellIndex to) const {
    const std::int64_t a = vertex_for(from), b = vertex_for(to);
    if (a < 0 || b < 0) return kUnreachable;
    return dist_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)];
  }

  bool reachable(CellIndex from, CellIndex to) const {
    return distance_meters(from, to) != kUnreachable;
  }

  // First cell to step onto en route from -> to; kInvalidCell when there is
  // no route (or either endpoint is a wall).  next_hop(a, a) == a.
  CellIndex next_hop(CellIndex from, CellIndex to) const {
    const std::int64_t a = vertex_for(from), b = vertex_for(to);
    if (a < 0 || b < 0) return kInvalidCell;
    const std::int32_t s = succ_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)];
    return s < 0 ? kInvalidCell : vertex_cell_[static_cast<std::uint32_t>(s)];
  }

  // Full cell sequence including both endpoints, or nullopt if unreachable.
  std::optional<std::vector<CellIndex>> path(CellIndex from, CellIndex to) const {
    if (vertex_for(from) < 0 || vertex_for(to) < 0) return std::nullopt;
    std::vector<CellIndex> cells{from};
    CellIndex cur = from;
    while (cur != to) {
      const CellIndex next = next_hop(cur, to);
      if (next == kInvalidCell) return std::nullopt;
      cells.push_back(next);
      cur = next;
    }
    return cells;
  }

  std::uint32_t vertex_count() const { return n_; }
  double lambda() const { return lambda_; }
  std::uint64_t content_hash() const { return hash_; }

  // --- binary cache ---
  //
  // Layout: magic, version, graph hash, n, vertex->cell table, distance
  // matrix, successor matrix.  Any mismatch or short read just reports
  // "no usable cache" and the caller recomputes.

  void save_cache(const std::filesystem::path& file) const {
    std::filesystem::create_directories(file.parent_path());
    const std::filesystem::path tmp = file.string() + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot write path cache " + tmp.string());
    auto put = [f](const void* p, std::size_t bytes) {
      if (std::fwrite(p, 1, bytes, f) != bytes)
        throw std::runtime_error("short write to path cache");
    };
    try {
      put(kMagic, 4);
      const std::uint16_t version = kVersion;
      put(&version, sizeof(version));
      put(&hash_, sizeof(hash_));
      put(&n_, sizeof(n_));
      put(vertex_cell_.data(), vertex_cell_.size() * sizeof(CellIndex));
      put(dist_.data(), dist_.size() * sizeof(double));
      put(succ_.data(), succ_.size() * sizeof(std::int32_t));
    } catch (...) {
      std::fclose(f);
      std::filesystem::remove(tmp);
      throw;
    }
    std::fclose(f);
    std::filesystem::rename(tmp, file);
  }

  static std::optional<PathTable> load_cache(const std::filesystem::path& file,
                                             std::uint64_t expected_hash,
                                             double lambda) {
    std::FILE* f = std::fopen(file.c_str(), "rb");
    if (!f) return std::nullopt;
    auto fail = [f]() -> std::optional<PathTable> {
      std::fclose(f);
      return std::nullopt;
    };
    auto get = [f](void* p, std::size_t bytes) {
      return std::fread(p, 1, bytes, f) == bytes;
    };
    char magic[4];
    std::uint16_t version = 0;
    PathTable t;
    if (!get(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) return fail();
    if (!get(&version, sizeof(version)) || version != kVersion) return fail();
    if (!get(&t.hash_, sizeof(t.hash_)) || t.hash_ != expected_hash) return fail();
    if (!get(&t.n_, sizeof(t.n_)) || t.n_ == 0 || t.n_ > 100000) return fail();
    const std::size_t n = t.n_;
    t.vertex_cell_.resize(n);
    t.dist_.resize(n * n);
    t.succ_.resize(n * n);
    if (!get(t.vertex_cell_.data(), n * sizeof(CellIndex))) return fail();
    if (!get(t.dist_.data(), n * n * sizeof(double))) return fail();
    if (!get(t.succ_.data(), n * n * sizeof(std::int32_t))) return fail();
    // Trailing garbage also means corruption.
    char extra;
    if (std::fread(&extra, 1, 1, f) != 0) return fail();
    std::fclose(f);
    t.lambda_ = lambda;
    t.build_cell_index();
    return t;
  }

  // Cache directory resolution: explicit argument, else $WARDSIM_CACHE_DIR,
  // else a "wardsim-cache" directory under the system temp dir.
  static std::filesystem::path cache_dir(const std::string& explicit_dir = {}) {
    if (!explicit_dir.empty()) return explicit_dir;
    if (const char* env = std::getenv("WARDSIM_CACHE_DIR"); env && *env) return env;
    return std::filesystem::temp_directory_path() / "wardsim-cache";
  }

  static std::filesystem::path cache_file(const std::filesystem::path& dir,
                                          std::uint64_t hash) {
    char name[32];
    std::snprintf(name, sizeof(name), "%016llx.wspt",
                  static_cast<unsigned long long>(hash));
    return dir / name;
  }

  // Load when a valid cache exists, else compute and (best effort) save.
  static PathTable load_or_compute(const NavGraph& graph,
                                   const std::string& dir = {},
                                   std::uint32_t max_vertices = kDefaultMaxVertices,
                                   bool* was_cached = nullptr) {
    const std::filesystem::path d = cache_dir(dir);
    const std::filesystem::path file = cache_file(d, graph.content_hash());
    if (auto t = load_cache(file, graph.content_hash(), graph.lambda())) {
      if (was_cached) *was_cached = true;
      return std::move(*t);
    }
    PathTable t = compute(graph, max_vertices);
    if (was_cached) *was_cached = false;
    try {
      t.save_cache(file);
    } catch (...) {
      // A read-only cache dir must not break the run.
    }
    return t;
  }

 private:
  static constexpr char kMagic[4] = {'W', 'S', 'P', 'T'};
  static constexpr std::uint16_t kVersion = 1;

  void build_cell_index() {
    CellIndex max_cell = 0;
    for (CellIndex c : vertex_cell_) max_cell = std::max(max_cell, c);
    cell_vertex_.assign(max_cell + 1, -1);
    for (std::uint32_t v = 0; v < n_; ++v)
      cell_vertex_[vertex_cell_[v]] = static_cast<std::int64_t>(v);
  }

  std::int64_t vertex_for(CellIndex cell) const {
    if (cell >= cell_vertex_.size()) return -1;
    return cell_vertex_[cell];
  }

  std::uint64_t hash_ = 0;
  double lambda_ = kDefaultLambda;
  std::uint32_t n_ = 0;
  std::vector<CellIndex> vertex_cell_;
  std::vector<std::int64_t> cell_vertex_;
  std::vector<double> dist_;
  std::vector<std::int32_t> succ_;
};

}  // namespace wardsim
