// Loads a scenario's map, routes between two named locations with and
// without the wall-discomfort penalty, and prints both routes as ASCII art.
//
//   route_demo [scenario.json] [from] [to]
//
// Defaults walk the bundled corridor from home:p1 to dining.

#include <cstdio>
#include <string>
#include <vector>

#include "wardsim/nav_graph.hpp"
#include "wardsim/path_table.hpp"
#include "wardsim/scenario.hpp"

using namespace wardsim;

namespace {

void print_route(const GridMap& map, const PathTable& table, CellIndex from,
                 CellIndex to, double lambda) {
  const auto route = table.path(from, to);
  if (!route) {
    std::printf("no route\n");
    return;
  }
  std::vector<char> art(map.size(), ' ');
  for (CellIndex c = 0; c < map.size(); ++c)
    if (!map.accessible(c)) art[c] = '#';
  for (CellIndex c : *route) art[c] = 'o';
  art[from] = 'A';
  art[to] = 'B';
  std::printf("penalty %.2f: %.2f m over %zu cells\n", lambda,
              table.distance_meters(from, to), route->size());
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) std::putchar(art[map.index(x, y)]);
    std::putchar('\n');
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string scenario_file =
      argc > 1 ? argv[1] : "assets/scenarios/corridor.json";
  const std::string from_name = argc > 2 ? argv[2] : "home:p1";
  const std::string to_name = argc > 3 ? argv[3] : "dining";
  try {
    const Scenario sc = Scenario::load(scenario_file);
    const GridMap map = sc.load_map();
    const auto from = map.location_cells(from_name);
    const auto to = map.location_cells(to_name);
    if (from.empty() || to.empty()) {
      std::fprintf(stderr, "unknown location; this map has:");
      for (const std::string& n : map.location_names())
        std::fprintf(stderr, " %s", n.c_str());
      std::fprintf(stderr, "\n");
      return 1;
    }
    for (double lambda : {sc.lambda, 1.0}) {
      const PathTable table = PathTable::compute(NavGraph(map, lambda));
      print_route(map, table, from.front(), to.front(), lambda);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
