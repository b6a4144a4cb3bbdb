#!/usr/bin/env python3
"""Regenerate the bundled maps and scenarios under assets/.

Each map is a grid of coloured cells written as a 1-pixel-per-cell PNG.
The palette table below is the single source of truth: it drives both the
pixels and the palette block embedded in every scenario document, so the
simulator always decodes the PNGs the way this script painted them.

Layouts are deterministic (no RNG): rectangular rooms carved into a
walkable hall, with door gaps, location-filled interiors, and a few
landmark cells along the corridors.

Usage: python3 scripts/make_maps.py [--out assets]
"""

import argparse
import json
from pathlib import Path

from PIL import Image

# glyph -> (hex colour, palette entry)
PALETTE = {
    "#": ("000000", {"kind": "boundary"}),
    ".": ("00ff00", {"kind": "walkable"}),
    "*": ("ffffff", {"kind": "landmark"}),
    "T": ("0000ff", {"kind": "location", "name": "toilet"}),
    "D": ("ffa500", {"kind": "location", "name": "dining"}),
    "C": ("ff0000", {"kind": "location", "name": "clinic"}),
    "P": ("800080", {"kind": "location", "name": "physio"}),
    "S": ("ffff00", {"kind": "location", "name": "social"}),
    "N": ("00ffff", {"kind": "location", "name": "nurse-station"}),
    "H": ("ff69b4", {"kind": "location", "name": "home:p1"}),
    "G": ("dda0dd", {"kind": "location", "name": "home:p2"}),
}


def palette_json():
    return {f"#{colour}": dict(entry) for colour, entry in PALETTE.values()}


class Grid:
    def __init__(self, width, height):
        self.width = width
        self.height = height
        self.cells = [["." for _ in range(width)] for _ in range(height)]
        for x in range(width):
            self.cells[0][x] = self.cells[height - 1][x] = "#"
        for y in range(height):
            self.cells[y][0] = self.cells[y][width - 1] = "#"

    def room(self, x0, y0, x1, y1, fill, doors):
        """Walled rectangle (corners inclusive) with `fill` inside and
        door cells carved back out of the wall ring."""
        for x in range(x0, x1 + 1):
            self.cells[y0][x] = self.cells[y1][x] = "#"
        for y in range(y0, y1 + 1):
            self.cells[y][x0] = self.cells[y][x1] = "#"
        for y in range(y0 + 1, y1):
            for x in range(x0 + 1, x1):
                self.cells[y][x] = fill
        for x, y in doors:
            assert self.cells[y][x] == "#", f"door ({x},{y}) is not on a wall"
            self.cells[y][x] = "."

    def block(self, x0, y0, x1, y1):
        for y in range(y0, y1 + 1):
            for x in range(x0, x1 + 1):
                self.cells[y][x] = "#"

    def put(self, x, y, glyph, expect="."):
        assert self.cells[y][x] == expect, (
            f"({x},{y}) holds '{self.cells[y][x]}', expected '{expect}'")
        self.cells[y][x] = glyph

    def assert_connected(self):
        """Every non-boundary cell must be orthogonally reachable from the
        first one (a conservative check: orthogonal connectivity implies
        connectivity under no-corner-cut diagonal movement)."""
        cells = {(x, y)
                 for y in range(self.height)
                 for x in range(self.width)
                 if self.cells[y][x] != "#"}
        assert cells, "map has no walkable cells"
        seen = set()
        frontier = [next(iter(sorted(cells)))]
        while frontier:
            x, y = frontier.pop()
            if (x, y) in seen:
                continue
            seen.add((x, y))
            for nx, ny in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                if (nx, ny) in cells and (nx, ny) not in seen:
                    frontier.append((nx, ny))
        missing = cells - seen
        assert not missing, f"unreachable cells: {sorted(missing)[:8]} ..."

    def counts(self):
        flat = [c for row in self.cells for c in row]
        return {g: flat.count(g) for g in sorted(set(flat))}

    def save_png(self, path):
        img = Image.new("RGB", (self.width, self.height))
        for y in range(self.height):
            for x in range(self.width):
                colour = PALETTE[self.cells[y][x]][0]
                img.putpixel((x, y), tuple(int(colour[i:i + 2], 16) for i in (0, 2, 4)))
        img.save(path)


def corridor_map():
    g = Grid(16, 5)
    g.room(8, 0, 15, 4, "D", doors=[(8, 1), (8, 2), (8, 3)])
    # open the dining room into the corridor: keep only the east half as D
    for y in range(1, 4):
        for x in range(9, 12):
            g.cells[y][x] = "."
    g.put(1, 1, "H")
    g.put(1, 2, "H")
    g.put(5, 1, "*")
    g.put(6, 3, "*")
    g.put(14, 3, "T", expect="D")
    return g


def ward_small_map():
    g = Grid(30, 20)
    g.room(0, 0, 7, 6, "C", doors=[(3, 6), (4, 6)])
    g.room(9, 0, 19, 6, "D", doors=[(13, 6), (14, 6)])
    g.room(21, 0, 29, 6, "P", doors=[(25, 6), (26, 6)])
    g.room(0, 12, 8, 19, "S", doors=[(3, 12), (4, 12)])
    g.room(10, 12, 15, 19, "H", doors=[(12, 12), (13, 12)])
    g.room(17, 12, 22, 19, "G", doors=[(19, 12), (20, 12)])
    g.room(24, 12, 29, 19, "T", doors=[(26, 12), (27, 12)])
    for pos in ((14, 8), (15, 8), (14, 9), (15, 9)):
        g.put(*pos, "N")
    for pos in ((4, 9), (10, 7), (18, 10), (26, 8), (8, 11)):
        g.put(*pos, "*")
    return g


def ward_large_map():
    g = Grid(60, 40)
    # north wing
    g.room(0, 0, 11, 8, "C", doors=[(5, 8), (6, 8)])
    g.room(13, 0, 27, 8, "D", doors=[(19, 8), (20, 8)])
    g.room(29, 0, 43, 8, ".", doors=[(35, 8), (36, 8)])   # day room
    g.room(45, 0, 59, 8, "P", doors=[(51, 8), (52, 8)])
    # south wing
    g.room(0, 31, 12, 39, "S", doors=[(5, 31), (6, 31)])
    g.room(14, 31, 21, 39, "H", doors=[(17, 31), (18, 31)])
    g.room(23, 31, 30, 39, "G", doors=[(26, 31), (27, 31)])
    g.room(32, 31, 40, 39, ".", doors=[(35, 31), (36, 31)])  # guest room
    g.room(42, 31, 59, 39, "T", doors=[(49, 31), (50, 31)])
    # east-wing washroom halfway between the wings
    g.room(52, 13, 59, 21, "T", doors=[(52, 16), (52, 17)])
    # inner courtyard block turns the hall into a corridor loop
    g.block(18, 14, 41, 25)
    for pos in ((10, 19), (11, 19), (10, 20), (11, 20)):
        g.put(*pos, "N")
    for pos in ((5, 10), (20, 10), (36, 10), (51, 11), (15, 20), (45, 20),
                (5, 29), (20, 29), (36, 29), (50, 29)):
        g.put(*pos, "*")
    return g


def base_scenario(map_name, horizon, seed=42):
    return {
        "map": f"../maps/{map_name}.png",
        "palette": palette_json(),
        "lambda": 1.5,
        "step_seconds": 1,
        "horizon": horizon,
        "seed": seed,
        "start_clock": "08:00",
        "agents": [],
    }


def pwd_block(home, schedule, needs):
    return {
        "type": "pwd",
        "id": "p1",
        "home": home,
        "capacity": 1.0,
        "p_forget_cell": 0.0,
        "p_forget_appointment": 0.0,
        "sight": 5,
        "fov": 90,
        "p_landmarks": 0.1,
        "p_interventions": 0.8,
        "schedule": schedule,
        "needs": needs,
    }


NURSE_BLOCK = {"type": "nurse", "id": "n1", "home": "nurse-station", "sight": 10}
WATCH_BLOCK = {
    "type": "watch",
    "id": "w1",
    "patient": "p1",
    "cooldown": 60,
    "sensor_model": 0.1,
    "n_help": 3,
}

# One resident's day: breakfast, a medical examination, lunch and an
# afternoon physiotherapy slot, with toilet and social needs in between.
DAY_SCHEDULE = [
    {"at": "08:05", "duration": 1800, "location": "dining"},
    {"at": "10:00", "duration": 1800, "location": "clinic"},
    {"at": "12:00", "duration": 1800, "location": "dining"},
    {"at": "15:00", "duration": 2700, "location": "physio"},
]
DAY_NEEDS = [
    {"name": "toilet", "growth_rate": 0.00018, "threshold": 1.0,
     "location": "toilet", "service_time": 180},
    {"name": "social", "growth_rate": 0.00009, "threshold": 1.0,
     "location": "social", "service_time": 900},
]


def corridor_scenario():
    doc = base_scenario("corridor", horizon=1000)
    doc["agents"] = [pwd_block(
        "home:p1",
        schedule=[{"start": 100, "duration": 60, "location": "dining"}],
        needs=[{"name": "toilet", "growth_rate": 0.002, "threshold": 1.0,
                "location": "toilet", "service_time": 30}],
    )]
    return doc


def ward_scenario(map_name):
    doc = base_scenario(map_name, horizon=28800)
    doc["agents"] = [
        pwd_block("home:p1", schedule=DAY_SCHEDULE, needs=DAY_NEEDS),
        dict(NURSE_BLOCK),
        dict(WATCH_BLOCK),
    ]
    return doc


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=None,
                        help="assets directory (default: <repo>/assets)")
    args = parser.parse_args()
    repo = Path(__file__).resolve().parent.parent
    out = Path(args.out) if args.out else repo / "assets"
    maps_dir = out / "maps"
    scenarios_dir = out / "scenarios"
    maps_dir.mkdir(parents=True, exist_ok=True)
    scenarios_dir.mkdir(parents=True, exist_ok=True)

    maps = {
        "corridor": corridor_map(),
        "ward_small": ward_small_map(),
        "ward_large": ward_large_map(),
    }
    for name, grid in maps.items():
        grid.assert_connected()
        grid.save_png(maps_dir / f"{name}.png")
        counts = grid.counts()
        total = grid.width * grid.height
        navigable = total - counts.get("#", 0)
        print(f"{name}: {grid.width}x{grid.height} = {total} cells, "
              f"{navigable} navigable, features {counts}")

    scenarios = {
        "corridor": corridor_scenario(),
        "ward_small": ward_scenario("ward_small"),
        "ward_large": ward_scenario("ward_large"),
    }
    for name, doc in scenarios.items():
        path = scenarios_dir / f"{name}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
