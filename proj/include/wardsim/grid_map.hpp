#pragma once

// The static world: a rectangular grid of cells decoded from a colour-coded
// map image.  Each cell carries exactly one feature; everything that is not
// a Boundary counts as accessible floor.

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wardsim/geometry.hpp"
#include "wardsim/image.hpp"
#include "wardsim/rng.hpp"

namespace wardsim {

enum class FeatureKind : std::uint8_t { Walkable, Boundary, Landmark, Location };

struct CellFeature {
  FeatureKind kind = FeatureKind::Walkable;
  std::string name;  // set only for Location ("toilet", "home:p1", ...)

  friend bool operator==(const CellFeature&, const CellFeature&) = default;
};

inline const char* feature_kind_name(FeatureKind k) {
  switch (k) {
    case FeatureKind::Walkable: return "walkable";
    case FeatureKind::Boundary: return "boundary";
    case FeatureKind::Landmark: return "landmark";
    case FeatureKind::Location: return "location";
  }
  return "?";
}

// Colour -> feature table.  Keys are packed 0xRRGGBB values; the map loader
// rejects any pixel colour missing from the table.
class Palette {
 public:
  void add(Rgb colour, CellFeature feature) {
    entries_[pack_rgb(colour)] = std::move(feature);
  }

  const CellFeature* lookup(Rgb colour) const {
    auto it = entries_.find(pack_rgb(colour));
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::uint32_t, CellFeature> entries_;
};

// "#rrggbb" (case-insensitive) -> Rgb; throws on anything else.
inline Rgb parse_hex_colour(const std::string& text) {
  auto bad = [&] { throw std::runtime_error("bad colour '" + text + "', expected #rrggbb"); };
  if (text.size() != 7 || text[0] != '#') bad();
  std::uint32_t v = 0;
  for (int i = 1; i < 7; ++i) {
    char c = text[i];
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else { bad(); d = 0; }
    v = (v << 4) | static_cast<std::uint32_t>(d);
  }
  return {static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8),
          static_cast<std::uint8_t>(v)};
}

class GridMap {
 public:
  GridMap(int width, int height, std::vector<CellFeature> features)
      : width_(width), height_(height), features_(std::move(features)) {
    if (width_ <= 0 || height_ <= 0)
      throw std::runtime_error("map must have positive dimensions");
    if (features_.size() != static_cast<std::size_t>(width_) * height_)
      throw std::runtime_error("feature list does not match map dimensions");
    build_indexes();
  }

  // Decode an image cell-per-pixel.  Unknown colours are an error that
  // names the offending pixel, since that is what map authors need to fix.
  static GridMap from_image(const ImageRgb8& image, const Palette& palette) {
    std::vector<CellFeature> features;
    features.reserve(static_cast<std::size_t>(image.width()) * image.height());
    for (int y = 0; y < image.height(); ++y) {
      for (int x = 0; x < image.width(); ++x) {
        const Rgb colour = image.at(x, y);
        const CellFeature* f = palette.lookup(colour);
        if (!f)
          throw std::runtime_error("map pixel (" + std::to_string(x) + "," +
                                   std::to_string(y) + ") has colour " + hex_rgb(colour) +
                                   " which is not in the palette");
        features.push_back(*f);
      }
    }
    return GridMap(image.width(), image.height(), std::move(features));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  CellIndex size() const { return static_cast<CellIndex>(features_.size()); }

  bool contains(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  CellIndex index(int x, int y) const {
    return static_cast<CellIndex>(y) * static_cast<CellIndex>(width_) +
           static_cast<CellIndex>(x);
  }
  CellIndex index(CellCoord c) const { return index(c.x, c.y); }

  CellCoord coord(CellIndex i) const {
    return {static_cast<int>(i % static_cast<CellIndex>(width_)),
            static_cast<int>(i / static_cast<CellIndex>(width_))};
  }

  const CellFeature& feature(CellIndex i) const { return features_[i]; }
  const CellFeature& feature(int x, int y) const { return features_[index(x, y)]; }

  bool accessible(CellIndex i) const {
    return features_[i].kind != FeatureKind::Boundary;
  }

  // Sorted indices of every non-Boundary cell.
  std::span<const CellIndex> accessible_cells() const { return accessible_; }
  CellIndex accessible_count() const { return static_cast<CellIndex>(accessible_.size()); }

  // Sorted cells of one named location; empty span if the name is unknown.
  std::span<const CellIndex> location_cells(const std::string& name) const {
    auto it = locations_.find(name);
    if (it == locations_.end()) return {};
    return it->second;
  }

  bool has_location(const std::string& name) const { return locations_.contains(name); }

  std::vector<std::string> location_names() const {
    std::vector<std::string> names;
    names.reserve(locations_.size());
    for (const auto& [name, cells] : locations_) names.push_back(name);
    return names;
  }

  std::span<const CellIndex> landmark_cells() const { return landmarks_; }

  // True when the cell touches a Boundary cell in its Moore neighbourhood;
  // routing charges the discomfort penalty on edges into such cells.
  bool hugs_boundary(CellIndex i) const { return hugs_boundary_[i] != 0; }

  // Stable digest of dimensions and features; keys the path-table cache.
  std::uint64_t content_hash() const { return hash_; }

 private:
  void build_indexes() {
    hugs_boundary_.assign(features_.size(), 0);
    for (CellIndex i = 0; i < size(); ++i) {
      const CellFeature& f = features_[i];
      const CellCoord c = coord(i);
      if (f.kind != FeatureKind::Boundary) accessible_.push_back(i);
      if (f.kind == FeatureKind::Landmark) landmarks_.push_back(i);
      if (f.kind == FeatureKind::Location) locations_[f.name].push_back(i);
      for (const Offset& o : kMooreOffsets) {
        const int nx = c.x + o.dx, ny = c.y + o.dy;
        if (contains(nx, ny) && features_[index(nx, ny)].kind == FeatureKind::Boundary) {
          hugs_boundary_[i] = 1;
          break;
        }
      }
    }

    std::uint64_t h = 0xCBF29CE484222325ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 0x100000001B3ull;
    };
    mix(static_cast<std::uint64_t>(width_));
    mix(static_cast<std::uint64_t>(height_));
    for (const CellFeature& f : features_) {
      mix(static_cast<std::uint64_t>(f.kind));
      mix(fnv1a64(f.name));
    }
    hash_ = h;
  }

  int width_;
  int height_;
  std::vector<CellFeature> features_;
  std::vector<CellIndex> accessible_;
  std::vector<CellIndex> landmarks_;
  std::vector<std::uint8_t> hugs_boundary_;
  std::map<std::string, std::vector<CellIndex>> locations_;
  std::uint64_t hash_ = 0;
};

}  // namespace wardsim
