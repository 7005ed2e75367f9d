#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <string>

#include <json.hpp>

#include "cartogrammer/cartogram_engine.hpp"
#include "cartogrammer/geojson.hpp"
#include "cartogrammer/presentation.hpp"
#include "fixtures.hpp"

using namespace cartogrammer;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

// Candidates 1, 2, 5 x 10^k enumerated over a wide range, independent of
// the library's closed form.
double nice_by_enumeration(double x) {
  double best = 0.0, best_d = 1e300;
  for (int k = -12; k <= 15; ++k) {
    for (double m : {1.0, 2.0, 5.0}) {
      const double c = m * std::pow(10.0, k);
      const double d = std::abs(std::log10(c) - std::log10(x));
      if (d < best_d - 1e-12) {
        best = c;
        best_d = d;
      }
    }
  }
  return best;
}

bool valid_coloring(const AdjacencyGraph& g, const ColorAssignment& c) {
  for (const auto& [a, b] : g.edges) {
    if (c.index_of(a) == c.index_of(b)) return false;
  }
  return true;
}

// Smallest k such that some k-coloring is proper, by exhaustive search.
int chromatic_number(const AdjacencyGraph& g) {
  const std::size_t n = g.nodes.size();
  for (int k = 1; k <= static_cast<int>(n); ++k) {
    std::vector<int> colors(n, 0);
    while (true) {
      ColorAssignment c;
      for (std::size_t i = 0; i < n; ++i) c.index[g.nodes[i]] = colors[i];
      if (valid_coloring(g, c)) return k;
      std::size_t i = 0;
      while (i < n && ++colors[i] == k) colors[i++] = 0;
      if (i == n) break;
    }
  }
  return static_cast<int>(n);
}

AdjacencyGraph triangle() {
  AdjacencyGraph g;
  g.nodes = {"A", "B", "C"};
  g.edges = {{"A", "B"}, {"A", "C"}, {"B", "C"}};
  return g;
}

}  // namespace

TEST(NiceNumber, Examples) {
  EXPECT_EQ(nice_number(1.0), 1.0);
  EXPECT_EQ(nice_number(30.0), 20.0);
  EXPECT_EQ(nice_number(53400.0), 50000.0);
  EXPECT_EQ(nice_number(900.0), 1000.0);
  EXPECT_THROW(nice_number(0.0), DomainError);
  EXPECT_THROW(nice_number(-3.0), DomainError);
}

TEST(NiceNumber, TiesGoToTheSmallerCandidate) {
  EXPECT_EQ(nice_number(std::sqrt(2.0)), 1.0);
  EXPECT_EQ(nice_number(std::sqrt(1000.0)), 20.0);
}

TEST(NiceNumberProperty, MatchesEnumerationWithinRatioBound) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> exponent(-8.0, 12.0);
  for (int i = 0; i < 5000; ++i) {
    const double x = std::pow(10.0, exponent(rng));
    const double nice = nice_number(x);
    EXPECT_DOUBLE_EQ(nice, nice_by_enumeration(x)) << x;
    EXPECT_LE(std::max(x / nice, nice / x), std::sqrt(5.0) * (1 + 1e-12)) << x;
  }
}

TEST(ComputeLegend, Examples) {
  const LegendSpec a = compute_legend(8.9e6, "persons", 1.5e5);
  EXPECT_EQ(a.value, 50000.0);
  EXPECT_NEAR(a.side_px, 29.0, 0.05);
  EXPECT_EQ(a.label, "represents 50,000 persons");
  EXPECT_EQ(a.color, "#707070");
  const double fraction = a.value / 8.9e6;
  EXPECT_GT(fraction, 0.005);
  EXPECT_LT(fraction, 0.009);

  const LegendSpec b = compute_legend(900.0, "", 900.0);
  EXPECT_EQ(b.value, 1000.0);
  EXPECT_NEAR(b.side_px, std::sqrt(1000.0), 1e-12);
  EXPECT_EQ(b.label, "represents 1,000");
}

TEST(ComputeLegendProperty, AreaLawAndSideBounds) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> exponent(0.0, 13.0), area(1e3, 1e6);
  const double lo = 30.0 / std::pow(5.0, 0.25), hi = 30.0 * std::pow(5.0, 0.25);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::pow(10.0, exponent(rng));
    const double a = area(rng);
    const LegendSpec l = compute_legend(v, "x", a);
    EXPECT_NEAR(l.side_px * l.side_px * v / a, l.value, 1e-9 * l.value);
    EXPECT_GE(l.side_px, lo - 1e-9);
    EXPECT_LE(l.side_px, hi + 1e-9);
  }
}

TEST(FormatValue, Examples) {
  EXPECT_EQ(format_value(384300, "€"), "384,300 €");
  EXPECT_EQ(format_value(375.4e9, "€"), "375.4 billion €");
  EXPECT_EQ(format_value(0, ""), "0");
  EXPECT_EQ(format_value(1.5e6, "persons"), "1.5 million persons");
  EXPECT_EQ(format_value(8901064, "persons"), "8.901 million persons");
  EXPECT_EQ(format_value(999999.999), "1 million");
  EXPECT_EQ(format_value(999.95e6), "1 billion");
  EXPECT_EQ(format_value(12.345), "12.35");
  EXPECT_EQ(format_value(2.5e15), "2,500 trillion");
  EXPECT_THROW(format_value(-1), DomainError);
}

TEST(Palette, FixedEntriesAndHighlights) {
  std::set<std::string> base(Palette::kBase.begin(), Palette::kBase.end());
  EXPECT_EQ(base.size(), 6u);
  EXPECT_EQ(base.count(std::string(Palette::kMissing)), 0u);
  EXPECT_EQ(base.count(std::string(Palette::kLegend)), 0u);
  EXPECT_EQ(Palette::kBase[Palette::kPinkIndex], "#E7298A");
  // Reference values from an independent HSL conversion (colorsys).
  const std::array<std::string, 6> expected{"#2BDBA6", "#FD862A", "#A5A2CE",
                                            "#FF5CBD", "#8DDB36", "#FDCA37"};
  EXPECT_EQ(Palette::highlight(), expected);
}

TEST(AssignColors, EmptyEdgeSetUsesFirstIndex) {
  AdjacencyGraph g;
  g.nodes = {"A", "B", "C"};
  const ColorAssignment c = assign_colors(g);
  for (const auto& id : g.nodes) EXPECT_EQ(c.index_of(id), 0);
}

TEST(AssignColors, TriangleNeedsThreeInIdOrder) {
  const AdjacencyGraph g = triangle();
  EXPECT_EQ(chromatic_number(g), 3);
  const ColorAssignment c = assign_colors(g);
  EXPECT_EQ(c.index_of("A"), 0);
  EXPECT_EQ(c.index_of("B"), 1);
  EXPECT_EQ(c.index_of("C"), 2);
}

TEST(AssignColors, AustriaValidAndDeterministic) {
  const auto map = parse_geojson(fixtures::austria());
  const AdjacencyGraph g = build_adjacency(map);
  const ColorAssignment c = assign_colors(g);
  EXPECT_TRUE(valid_coloring(g, c));
  EXPECT_LE(c.distinct_indices(), 4u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(assign_colors(build_adjacency(map)).index, c.index);
}

TEST(AssignColors, OverridesCountByNearestIndex) {
  const AdjacencyGraph g = triangle();
  // #1A9D76 is nearest to palette entry 0
  const ColorAssignment c = assign_colors(g, {{"C", "#1a9d76"}});
  EXPECT_EQ(c.fill("C"), "#1A9D76");
  EXPECT_EQ(c.index_of("C"), 0);
  EXPECT_TRUE(valid_coloring(g, c));
  EXPECT_EQ(c.fill("A", true), "#CCCCCC");
  EXPECT_THROW(assign_colors(g, {{"A", "#cccccc"}}), DomainError);
  EXPECT_THROW(assign_colors(g, {{"Z", "#000000"}}), DomainError);
}

TEST(AssignColorsProperty, RandomPlanarGraphs) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> regions(2, 40);
  for (int trial = 0; trial < 200; ++trial) {
    const AdjacencyGraph g = fixtures::random_planar_graph(rng, regions(rng), trial % 2 == 1);
    const ColorAssignment c = assign_colors(g);
    ASSERT_TRUE(valid_coloring(g, c)) << "trial " << trial;
    EXPECT_LE(c.distinct_indices(), 6u);
    // Reordering the node list must not change the result.
    AdjacencyGraph shuffled = g;
    std::shuffle(shuffled.nodes.begin(), shuffled.nodes.end(), rng);
    EXPECT_EQ(assign_colors(shuffled).index, c.index);
  }
}

TEST(ExportSvg, SingleRegion) {
  const auto map = parse_geojson(fixtures::unit_square());
  const ColorAssignment colors = assign_colors(build_adjacency(map));
  const std::string svg = export_svg(map, colors, std::nullopt, {}, Canvas{});
  EXPECT_EQ(count(svg, "<path"), 1u);
  EXPECT_NE(svg.find("fill=\"#1B9E77\""), std::string::npos);
  EXPECT_EQ(svg.find("legend"), std::string::npos);
  EXPECT_EQ(svg, export_svg(map, colors, std::nullopt, {}, Canvas{}));
  EXPECT_THROW(export_svg(map, colors, std::nullopt, {}, Canvas{0, 0}), DomainError);
}

TEST(ExportSvg, MissingRegionIsGrayAndLegendSitsBelowTheMap) {
  const auto map = parse_geojson(fixtures::austria());
  const ColorAssignment colors = assign_colors(build_adjacency(map));
  const BoundDataset b = bind(map, parse_csv(fixtures::kDayNurseryCsv).at(0));
  const LegendSpec legend = legend_for(map, b, Canvas{});
  const std::string svg = export_svg(map, colors, legend, missing_ids(b), Canvas{});
  EXPECT_EQ(count(svg, "<path"), 9u);
  const auto wi = svg.find("<path id=\"WI\"");
  ASSERT_NE(wi, std::string::npos);
  EXPECT_EQ(svg.substr(svg.find("fill=", wi), 14), "fill=\"#CCCCCC\"");
  EXPECT_EQ(count(svg, "#CCCCCC"), 1u);
  EXPECT_NE(svg.find("<g id=\"legend\" fill=\"#707070\""), std::string::npos);
  EXPECT_NE(svg.find(legend.label), std::string::npos);

  const Viewport vp = Viewport::fit(map.bbox(), Canvas{});
  const auto rect_y = svg.find("y=\"", svg.find("<rect"));
  EXPECT_GT(std::stod(svg.substr(rect_y + 3)), vp.map_bottom());
}

TEST(ExportGeoJson, RoundTripAndDatasetValues) {
  const auto square = parse_geojson(fixtures::unit_square());
  const auto again = parse_geojson(export_geojson(square));
  EXPECT_TRUE(std::equal(square.vertices().begin(), square.vertices().end(),
                         again.vertices().begin(), again.vertices().end()));
  EXPECT_EQ(square.topology(), again.topology());

  const auto map = parse_geojson(fixtures::austria());
  const BoundDataset gdp = bind(map, parse_csv(fixtures::kGdpCsv).at(0));
  const CartogramResult res = run_dcn(map, compute_target_areas(map, gdp));
  GeoJsonExportOptions opts;
  opts.dataset = &gdp;
  const auto doc = nlohmann::json::parse(export_geojson(res.cartogram, opts));
  ASSERT_EQ(doc["features"].size(), map.region_count());
  bool found = false;
  for (const auto& f : doc["features"]) {
    if (f["properties"]["id"] == "WI") {
      EXPECT_EQ(f["properties"]["GDP"].get<double>(), 94000000000.0);
      found = true;
    }
  }
  EXPECT_TRUE(found);
  const auto reparsed = parse_geojson(export_geojson(res.cartogram, opts));
  EXPECT_TRUE(map.same_structure(reparsed));
}

TEST(ViewerBundle, SchemaForOneRegion) {
  const auto map = parse_geojson(fixtures::unit_square());
  const BoundDataset ds = bind(map, parse_csv("id,Population (persons)\nA,1000").at(0));
  const ColorAssignment colors = assign_colors(build_adjacency(map));
  const auto doc =
      nlohmann::json::parse(build_viewer_bundle(map, {{ds, map}}, colors, Canvas{}));
  EXPECT_EQ(doc["version"], 1);
  EXPECT_EQ(doc["animationMs"], 1000);
  EXPECT_EQ(doc["canvas"]["width"], 800);
  EXPECT_EQ(doc["canvas"]["height"], 600);
  EXPECT_EQ(doc["palette"]["base"].size(), 6u);
  EXPECT_EQ(doc["palette"]["highlight"][3], "#FF5CBD");
  EXPECT_EQ(doc["palette"]["missing"], "#CCCCCC");
  EXPECT_EQ(doc["palette"]["legend"], "#707070");
  ASSERT_EQ(doc["pools"].size(), 2u);
  EXPECT_EQ(doc["pools"]["conventional"].size(), doc["pools"]["Population"].size());
  EXPECT_EQ(doc["topology"]["rings"].size(), 1u);
  const auto& region = doc["topology"]["regions"][0];
  EXPECT_EQ(region["id"], "A");
  EXPECT_EQ(region["colorIndex"], 0);
  EXPECT_EQ(region["ringIds"], nlohmann::json::array({0}));
  EXPECT_TRUE(region["holeIds"].empty());
  const auto& d = doc["datasets"][0];
  EXPECT_EQ(d["name"], "Population");
  EXPECT_EQ(d["unit"], "persons");
  EXPECT_EQ(d["totalLabel"], "1,000 persons");
  EXPECT_EQ(d["values"]["A"], 1000.0);
  EXPECT_EQ(d["display"]["A"], "1,000 persons");
  EXPECT_TRUE(d["legend"].contains("sidePx"));
}

TEST(ViewerBundle, MissingValuesAndHoles) {
  const auto map = parse_geojson(fixtures::austria());
  const BoundDataset pop = bind(map, parse_csv(fixtures::kPopulationCsv).at(0));
  const BoundDataset nursery = bind(map, parse_csv(fixtures::kDayNurseryCsv).at(0));
  const auto pop_res = run_dcn(map, compute_target_areas(map, pop));
  const auto nur_res = run_dcn(map, compute_target_areas(map, nursery));
  const ColorAssignment colors = assign_colors(build_adjacency(map));
  const auto doc = nlohmann::json::parse(build_viewer_bundle(
      map, {{pop, pop_res.cartogram}, {nursery, nur_res.cartogram}}, colors, Canvas{}));
  EXPECT_EQ(doc["pools"].size(), 3u);
  for (const auto& [name, pool] : doc["pools"].items()) {
    EXPECT_EQ(pool.size(), map.vertices().size()) << name;
  }
  const auto& nur = doc["datasets"][1];
  EXPECT_TRUE(nur["values"]["WI"].is_null());
  EXPECT_EQ(nur["display"]["WI"], "no data");
  // Lower Austria: one outer ring plus the hole around Vienna.
  for (const auto& r : doc["topology"]["regions"]) {
    if (r["id"] == "NO") EXPECT_EQ(r["holeIds"].size(), 1u);
  }
}

TEST(ViewerBundle, StructuralMismatchIsRejected) {
  const auto map = parse_geojson(fixtures::austria());
  const auto coarse = parse_geojson(fixtures::austria(0.0));
  const BoundDataset pop = bind(map, parse_csv(fixtures::kPopulationCsv).at(0));
  const ColorAssignment colors = assign_colors(build_adjacency(map));
  EXPECT_THROW(build_viewer_bundle(map, {{pop, coarse}}, colors, Canvas{}), StructureMismatch);
  EXPECT_THROW(build_viewer_bundle(map, {}, colors, Canvas{}), DomainError);
}
