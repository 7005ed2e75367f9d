// Test fixtures: small hand-built maps and the 9-state Austria-like map.
#pragma once

#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cartogrammer/topology.hpp"

namespace fixtures {

using Json = nlohmann::ordered_json;
using Corners = std::vector<std::pair<double, double>>;

// Axis-aligned edges are subdivided at `step`; with integer corners and a
// power-of-two step every generated coordinate is exact, so shared borders
// and T-junctions produce identical vertices on both sides.
inline Json densified_ring(const Corners& corners, double step) {
  Json ring = Json::array();
  for (std::size_t i = 0; i < corners.size(); ++i) {
    const auto [x0, y0] = corners[i];
    const auto [x1, y1] = corners[(i + 1) % corners.size()];
    const double len = std::abs(x1 - x0) + std::abs(y1 - y0);
    const int pieces = step > 0.0 ? static_cast<int>(std::lround(len / step)) : 1;
    for (int k = 0; k < std::max(pieces, 1); ++k) {
      const double t = pieces > 0 ? static_cast<double>(k) / pieces : 0.0;
      ring.push_back({x0 + (x1 - x0) * t, y0 + (y1 - y0) * t});
    }
  }
  ring.push_back(ring.front());
  return ring;
}

struct FeatureSpec {
  std::string id;
  std::string name;
  // Each polygon: outer ring followed by holes.
  std::vector<std::vector<Corners>> polygons;
};

inline std::string collection(const std::vector<FeatureSpec>& specs, double step = 0.0) {
  Json features = Json::array();
  for (const auto& spec : specs) {
    Json polys = Json::array();
    for (const auto& poly : spec.polygons) {
      Json rings = Json::array();
      for (const auto& ring : poly) rings.push_back(densified_ring(ring, step));
      polys.push_back(rings);
    }
    Json geometry;
    if (polys.size() == 1) {
      geometry = {{"type", "Polygon"}, {"coordinates", polys[0]}};
    } else {
      geometry = {{"type", "MultiPolygon"}, {"coordinates", polys}};
    }
    features.push_back({{"type", "Feature"},
                        {"properties", {{"id", spec.id}, {"name", spec.name}, {"abbr", spec.id}}},
                        {"geometry", geometry}});
  }
  return Json{{"type", "FeatureCollection"}, {"features", features}}.dump();
}

inline Corners rect(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

inline std::string unit_square() { return collection({{"A", "A", {{rect(0, 0, 1, 1)}}}}); }

inline std::string two_squares() {
  return collection({{"A", "A", {{rect(0, 0, 1, 1)}}}, {"B", "B", {{rect(1, 0, 2, 1)}}}});
}

inline std::string corner_squares() {
  return collection({{"A", "A", {{rect(0, 0, 1, 1)}}}, {"B", "B", {{rect(1, 1, 2, 2)}}}});
}

inline std::string strip_of_four() {
  return collection({{"A", "A", {{rect(0, 0, 1, 1)}}},
                     {"B", "B", {{rect(1, 0, 2, 1)}}},
                     {"C", "C", {{rect(2, 0, 3, 1)}}},
                     {"D", "D", {{rect(3, 0, 4, 1)}}}});
}

// n x n unit squares named "r<row>c<col>", edges subdivided at `step`.
inline std::string grid(int n, double step) {
  std::vector<FeatureSpec> specs;
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const std::string id = "r" + std::to_string(row) + "c" + std::to_string(col);
      specs.push_back({id, id, {{rect(col, row, col + 1, row + 1)}}});
    }
  }
  return collection(specs, step);
}

// CSV giving the center cell of grid(n) weight `center` and every other cell 1.
inline std::string grid_hotspot_csv(int n, double center) {
  std::string csv = "id,X\n";
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const bool mid = row == n / 2 && col == n / 2;
      csv += "r" + std::to_string(row) + "c" + std::to_string(col) + "," +
             std::to_string(mid ? center : 1.0) + "\n";
    }
  }
  return csv;
}

// Nine federal states laid out on a 10 km grid. Vienna (WI) is a 2 x 2 block
// enclosed by Lower Austria, which therefore carries a hole; Tyrol is a
// MultiPolygon (North and East Tyrol).
inline std::vector<FeatureSpec> austria_specs() {
  return {
      {"BU", "Burgenland", {{rect(46, 8, 50, 18)}}},
      {"KA", "Kärnten", {{rect(25, 2, 38, 9)}}},
      {"NO", "Niederösterreich", {{rect(40, 18, 56, 30), rect(50, 22, 52, 24)}}},
      {"OO", "Oberösterreich", {{rect(24, 18, 40, 25)}}},
      {"SZ", "Salzburg", {{rect(21, 9, 29, 18)}}},
      {"ST", "Steiermark", {{rect(29, 9, 46, 18)}}},
      {"TR", "Tirol", {{rect(4, 10, 21, 16)}, {rect(21, 4, 25, 9)}}},
      {"VO", "Vorarlberg", {{rect(0, 10, 4, 17)}}},
      {"WI", "Wien", {{rect(50, 22, 52, 24)}}},
  };
}

inline std::string austria(double step = 0.5) { return collection(austria_specs(), step); }

inline const char* kPopulationCsv =
    "id,Population (persons)\n"
    "BU,294436\nKA,561293\nNO,1684287\nOO,1490279\nSZ,558410\n"
    "ST,1246395\nTR,757634\nVO,397139\nWI,1911191\n";

inline const char* kGdpCsv =
    "id,GDP (€)\n"
    "BU,8900000000\nKA,20900000000\nNO,57200000000\nOO,65300000000\nSZ,29200000000\n"
    "ST,48500000000\nTR,33900000000\nVO,17500000000\nWI,94000000000\n";

inline const char* kGdpPerCapitaCsv =
    "id,GDP per capita (€)\n"
    "BU,30200\nKA,38200\nNO,35000\nOO,44800\nSZ,53300\n"
    "ST,39900\nTR,45700\nVO,47000\nWI,50200\n";

// Vienna's count is unknown.
inline const char* kDayNurseryCsv =
    "id,Day nursery staff (persons)\n"
    "BU,310\nKA,1030\nNO,2750\nOO,2450\nSZ,1150\n"
    "ST,2100\nTR,1780\nVO,1120\nWI,\n";

// Random planar adjacency graph: a lattice of cells (optionally with one
// diagonal per square, which keeps it planar) is split into connected
// clusters by randomized multi-source growth; contracting connected
// clusters of a planar graph leaves it planar.
inline cartogrammer::AdjacencyGraph random_planar_graph(std::mt19937_64& rng, int regions,
                                                        bool diagonals) {
  const int side = 8;
  std::vector<int> owner(side * side, -1);
  std::uniform_int_distribution<int> cell_dist(0, side * side - 1);
  std::deque<int> frontier;
  for (int r = 0; r < regions; ++r) {
    int c;
    do c = cell_dist(rng);
    while (owner[c] != -1);
    owner[c] = r;
    frontier.push_back(c);
  }
  auto neighbors = [&](int c) {
    const int x = c % side, y = c / side;
    std::vector<int> out;
    const int dx[] = {1, -1, 0, 0, 1, -1};
    const int dy[] = {0, 0, 1, -1, 1, -1};
    for (int k = 0; k < (diagonals ? 6 : 4); ++k) {
      const int nx = x + dx[k], ny = y + dy[k];
      if (nx >= 0 && ny >= 0 && nx < side && ny < side) out.push_back(ny * side + nx);
    }
    return out;
  };
  while (!frontier.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
    const std::size_t i = pick(rng);
    const int c = frontier[i];
    std::vector<int> open;
    for (int n : neighbors(c)) {
      if (owner[n] == -1) open.push_back(n);
    }
    if (open.empty()) {
      frontier.erase(frontier.begin() + static_cast<long>(i));
      continue;
    }
    std::uniform_int_distribution<std::size_t> next(0, open.size() - 1);
    const int n = open[next(rng)];
    owner[n] = owner[c];
    frontier.push_back(n);
  }
  cartogrammer::AdjacencyGraph g;
  auto name = [](int r) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "R%02d", r);
    return std::string(buf);
  };
  for (int r = 0; r < regions; ++r) g.nodes.push_back(name(r));
  for (int c = 0; c < side * side; ++c) {
    for (int n : neighbors(c)) {
      if (owner[n] != owner[c]) {
        const auto a = name(owner[c]), b = name(owner[n]);
        g.edges.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
      }
    }
  }
  return g;
}

}  // namespace fixtures
