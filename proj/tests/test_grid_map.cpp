#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "support/ascii_map.hpp"
#include "support/tmpdir.hpp"
#include "wardsim/grid_map.hpp"
#include "wardsim/image.hpp"

using namespace wardsim;
using test_support::ascii_image;
using test_support::ascii_map;
using test_support::ascii_palette;

namespace {

const std::vector<std::string> kWard = {
    "########",
    "#..*...#",
    "#.#..T.#",
    "#..H.T.#",
    "########",
};

TEST(GridMap, DecodesAsciiFixture) {
  const GridMap m = ascii_map(kWard);
  EXPECT_EQ(m.width(), 8);
  EXPECT_EQ(m.height(), 5);
  EXPECT_EQ(m.size(), 40u);
  EXPECT_EQ(m.feature(0, 0).kind, FeatureKind::Boundary);
  EXPECT_EQ(m.feature(1, 1).kind, FeatureKind::Walkable);
  EXPECT_EQ(m.feature(3, 1).kind, FeatureKind::Landmark);
  EXPECT_EQ(m.feature(5, 2).kind, FeatureKind::Location);
  EXPECT_EQ(m.feature(5, 2).name, "toilet");
  EXPECT_EQ(m.feature(3, 3).name, "home:p1");
}

TEST(GridMap, IndexCoordRoundTrip) {
  const GridMap m = ascii_map(kWard);
  for (CellIndex i = 0; i < m.size(); ++i) {
    const CellCoord c = m.coord(i);
    EXPECT_EQ(m.index(c), i);
    EXPECT_TRUE(m.contains(c.x, c.y));
  }
  EXPECT_FALSE(m.contains(-1, 0));
  EXPECT_FALSE(m.contains(0, -1));
  EXPECT_FALSE(m.contains(8, 0));
  EXPECT_FALSE(m.contains(0, 5));
}

TEST(GridMap, AccessibleCellsAreSortedNonBoundary) {
  const GridMap m = ascii_map(kWard);
  const auto cells = m.accessible_cells();
  EXPECT_TRUE(std::is_sorted(cells.begin(), cells.end()));
  CellIndex expected = 0;
  for (CellIndex i = 0; i < m.size(); ++i)
    if (m.feature(i).kind != FeatureKind::Boundary) ++expected;
  EXPECT_EQ(m.accessible_count(), expected);
  for (CellIndex c : cells) EXPECT_TRUE(m.accessible(c));
  // Landmarks and locations are floor, walls are not.
  EXPECT_TRUE(m.accessible(m.index(3, 1)));
  EXPECT_TRUE(m.accessible(m.index(5, 2)));
  EXPECT_FALSE(m.accessible(m.index(0, 0)));
  EXPECT_FALSE(m.accessible(m.index(2, 2)));
}

TEST(GridMap, LocationLookup) {
  const GridMap m = ascii_map(kWard);
  EXPECT_TRUE(m.has_location("toilet"));
  EXPECT_TRUE(m.has_location("home:p1"));
  EXPECT_FALSE(m.has_location("dining"));
  const auto toilet = m.location_cells("toilet");
  ASSERT_EQ(toilet.size(), 2u);
  EXPECT_EQ(toilet[0], m.index(5, 2));
  EXPECT_EQ(toilet[1], m.index(5, 3));
  EXPECT_TRUE(m.location_cells("nowhere").empty());
  const auto names = m.location_names();
  EXPECT_EQ(names, (std::vector<std::string>{"home:p1", "toilet"}));
}

TEST(GridMap, LandmarkCells) {
  const GridMap m = ascii_map(kWard);
  const auto lm = m.landmark_cells();
  ASSERT_EQ(lm.size(), 1u);
  EXPECT_EQ(lm[0], m.index(3, 1));
}

TEST(GridMap, HugsBoundaryUsesMooreNeighbourhood) {
  const std::vector<std::string> rows = {
      "#######",
      "#.....#",
      "#.....#",
      "#.....#",
      "#######",
  };
  const GridMap m = ascii_map(rows);
  // Every edge-adjacent-to-wall cell hugs; the single centre cell does not.
  for (CellIndex c : m.accessible_cells()) {
    const CellCoord p = m.coord(c);
    const bool interior = p.x >= 2 && p.x <= 4 && p.y == 2;
    EXPECT_EQ(m.hugs_boundary(c), !interior) << "cell (" << p.x << "," << p.y << ")";
  }
}

TEST(GridMap, DiagonalWallContactCountsAsHugging) {
  const std::vector<std::string> rows = {
      "#....",
      ".....",
      ".....",
  };
  const GridMap m = ascii_map(rows);
  EXPECT_TRUE(m.hugs_boundary(m.index(1, 1)));   // diagonal contact
  EXPECT_FALSE(m.hugs_boundary(m.index(2, 1)));
  EXPECT_FALSE(m.hugs_boundary(m.index(2, 2)));
}

TEST(GridMap, FromImageMatchesDirectConstruction) {
  const GridMap direct = ascii_map(kWard);
  const GridMap decoded = GridMap::from_image(ascii_image(kWard), ascii_palette());
  ASSERT_EQ(decoded.size(), direct.size());
  for (CellIndex i = 0; i < direct.size(); ++i)
    EXPECT_EQ(decoded.feature(i), direct.feature(i)) << "cell " << i;
  EXPECT_EQ(decoded.content_hash(), direct.content_hash());
}

TEST(GridMap, FromImageRejectsUnknownColourWithPixelPosition) {
  ImageRgb8 img = ascii_image(kWard);
  img.set(4, 2, Rgb{0x12, 0x34, 0x56});
  try {
    GridMap::from_image(img, ascii_palette());
    FAIL() << "expected unknown-colour error";
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("(4,2)"), std::string::npos) << msg;
    EXPECT_NE(msg.find("#123456"), std::string::npos) << msg;
  }
}

TEST(GridMap, PngRoundTripPreservesMap) {
  test_support::TmpDir dir;
  const auto path = dir.path() / "ward.png";
  write_png_rgb8(path, ascii_image(kWard));
  const GridMap decoded = GridMap::from_image(read_png_rgb8(path), ascii_palette());
  EXPECT_EQ(decoded.content_hash(), ascii_map(kWard).content_hash());
}

TEST(GridMap, ContentHashDistinguishesMaps) {
  const GridMap base = ascii_map(kWard);
  auto rows = kWard;
  rows[2][4] = '#';  // flip one walkable cell to wall
  EXPECT_NE(ascii_map(rows).content_hash(), base.content_hash());

  rows = kWard;
  rows[3][3] = 'G';  // same kind, different location name
  EXPECT_NE(ascii_map(rows).content_hash(), base.content_hash());

  // Same cell list, different shape.
  const GridMap wide = ascii_map({"...."});
  const GridMap tall = ascii_map({".", ".", ".", "."});
  EXPECT_NE(wide.content_hash(), tall.content_hash());
}

TEST(GridMap, ConstructorValidation) {
  EXPECT_THROW(GridMap(0, 3, {}), std::runtime_error);
  EXPECT_THROW(GridMap(3, 0, {}), std::runtime_error);
  EXPECT_THROW(GridMap(2, 2, std::vector<CellFeature>(3)), std::runtime_error);
}

TEST(Palette, LookupAndOverwrite) {
  Palette p;
  EXPECT_EQ(p.lookup(Rgb{1, 2, 3}), nullptr);
  p.add(Rgb{1, 2, 3}, {FeatureKind::Walkable, ""});
  ASSERT_NE(p.lookup(Rgb{1, 2, 3}), nullptr);
  EXPECT_EQ(p.lookup(Rgb{1, 2, 3})->kind, FeatureKind::Walkable);
  p.add(Rgb{1, 2, 3}, {FeatureKind::Location, "toilet"});
  EXPECT_EQ(p.lookup(Rgb{1, 2, 3})->name, "toilet");
  EXPECT_EQ(p.size(), 1u);
}

TEST(Palette, ParseHexColour) {
  const Rgb c = parse_hex_colour("#1a2B3c");
  EXPECT_EQ(c.r, 0x1a);
  EXPECT_EQ(c.g, 0x2b);
  EXPECT_EQ(c.b, 0x3c);
  EXPECT_THROW(parse_hex_colour("1a2b3c"), std::runtime_error);
  EXPECT_THROW(parse_hex_colour("#1a2b3"), std::runtime_error);
  EXPECT_THROW(parse_hex_colour("#1a2b3cd"), std::runtime_error);
  EXPECT_THROW(parse_hex_colour("#1a2g3c"), std::runtime_error);
}

}  // namespace
