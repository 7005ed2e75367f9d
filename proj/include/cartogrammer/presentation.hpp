#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cartogrammer/cartogram_engine.hpp"
#include "cartogrammer/color.hpp"
#include "cartogrammer/data_pipeline.hpp"
#include "cartogrammer/errors.hpp"
#include "cartogrammer/format.hpp"
#include "cartogrammer/map_document.hpp"

namespace cartogrammer {

struct Canvas {
  int width = 800;
  int height = 600;
};

// Where a map lands on the canvas: uniform scale, centered inside the area
// left after the margins and the band reserved for the legend below it.
struct Viewport {
  static constexpr double kMargin = 10.0;
  static constexpr double kLegendBand = 70.0;

  double scale = 1.0;
  double offset_x = 0.0;
  double offset_y = 0.0;
  BBox bounds;

  static Viewport fit(const BBox& box, Canvas canvas) {
    if (canvas.width <= 0 || canvas.height <= 0) throw DomainError("zero-size canvas");
    const double avail_w = canvas.width - 2.0 * kMargin;
    const double avail_h = canvas.height - 2.0 * kMargin - kLegendBand;
    if (avail_w <= 0.0 || avail_h <= 0.0) throw DomainError("canvas too small for the map layout");
    if (!(box.width() > 0.0) || !(box.height() > 0.0)) throw DomainError("map has an empty extent");
    Viewport vp;
    vp.bounds = box;
    vp.scale = std::min(avail_w / box.width(), avail_h / box.height());
    vp.offset_x = kMargin + 0.5 * (avail_w - box.width() * vp.scale);
    vp.offset_y = kMargin + 0.5 * (avail_h - box.height() * vp.scale);
    return vp;
  }

  Point to_px(Point p) const {
    return {offset_x + scale * (p.x - bounds.xmin), offset_y + scale * (bounds.ymax - p.y)};
  }
  double map_bottom() const { return offset_y + scale * bounds.height(); }
};

// Rendered pixel area of the regions that carry data (all regions when
// nothing is missing) on a canvas of the given size.
inline double rendered_area_px(const MapDocument& map, Canvas canvas,
                               const std::set<std::string>& missing = {}) {
  const Viewport vp = Viewport::fit(map.bbox(), canvas);
  double area = 0.0;
  for (std::size_t i = 0; i < map.region_count(); ++i) {
    if (!missing.count(map.regions()[i].id)) area += area_by_index(map, i);
  }
  return area * vp.scale * vp.scale;
}

struct LegendSpec {
  double value = 0.0;
  std::string unit;
  double side_px = 0.0;
  std::string label;
  std::string color{Palette::kLegend};
};

// Value-to-area key: the value a 30 x 30 px square would carry, snapped to a
// nice number, with the square resized to represent exactly that value.
inline LegendSpec compute_legend(double total_value, const std::string& unit, double area_px) {
  if (!(total_value > 0.0) || !(area_px > 0.0)) {
    throw DomainError("legend needs a positive total and a positive rendered area");
  }
  constexpr double kAnchorSquarePx = 30.0 * 30.0;
  LegendSpec out;
  out.unit = unit;
  out.value = nice_number(kAnchorSquarePx * total_value / area_px);
  out.side_px = std::sqrt(out.value * area_px / total_value);
  out.label = "represents " + format_value(out.value, unit);
  return out;
}

inline std::set<std::string> missing_ids(const BoundDataset& bound) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < bound.ids.size(); ++i) {
    if (!bound.values[i]) out.insert(bound.ids[i]);
  }
  return out;
}

inline double dataset_total(const BoundDataset& bound) {
  double total = 0.0;
  for (const auto& v : bound.values) total += v.value_or(0.0);
  return total;
}

// Legend for a dataset drawn on `map` at `canvas` size.
inline LegendSpec legend_for(const MapDocument& map, const BoundDataset& bound, Canvas canvas) {
  return compute_legend(dataset_total(bound), bound.unit,
                        rendered_area_px(map, canvas, missing_ids(bound)));
}

inline std::string export_svg(const MapDocument& map, const ColorAssignment& colors,
                              const std::optional<LegendSpec>& legend,
                              const std::set<std::string>& missing, Canvas canvas) {
  const Viewport vp = Viewport::fit(map.bbox(), canvas);
  const auto pool = map.vertices();
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << canvas.width
      << "\" height=\"" << canvas.height << "\" viewBox=\"0 0 " << canvas.width << ' '
      << canvas.height << "\">\n";
  for (std::size_t r = 0; r < map.region_count(); ++r) {
    const Region& region = map.regions()[r];
    std::string d;
    auto emit_ring = [&](const Ring& ring) {
      for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point p = vp.to_px(pool[ring[i]]);
        d += (i == 0 ? "M" : " L") + std::string(" ") + detail::num(p.x) + ' ' + detail::num(p.y);
      }
      d += " Z ";
    };
    for (const Polygon& poly : region.polygons) {
      emit_ring(poly.outer);
      for (const Ring& hole : poly.holes) emit_ring(hole);
    }
    if (!d.empty()) d.pop_back();
    svg << "  <path id=\"" << detail::xml_escape(region.id) << "\" d=\"" << d << "\" fill=\""
        << colors.fill(region.id, missing.count(region.id) != 0)
        << "\" fill-rule=\"evenodd\" stroke=\"#FFFFFF\" stroke-width=\"0.75\"><title>"
        << detail::xml_escape(region.name) << "</title></path>\n";
  }
  if (legend) {
    const double top = vp.map_bottom() + 15.0;
    const double left = vp.offset_x;
    svg << "  <g id=\"legend\" fill=\"" << legend->color << "\">\n"
        << "    <rect x=\"" << detail::num(left) << "\" y=\"" << detail::num(top) << "\" width=\""
        << detail::num(legend->side_px) << "\" height=\"" << detail::num(legend->side_px)
        << "\"/>\n"
        << "    <text x=\"" << detail::num(left + legend->side_px + 8.0) << "\" y=\""
        << detail::num(top + 0.5 * legend->side_px + 5.0)
        << "\" font-family=\"sans-serif\" font-size=\"14\">" << detail::xml_escape(legend->label)
        << "</text>\n"
        << "  </g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

struct GeoJsonExportOptions {
  std::string id_property = "id";
  std::string name_property = "name";
  std::string abbr_property = "abbr";
  // Attached dataset values appear as a property named after the dataset.
  const BoundDataset* dataset = nullptr;
};

// Inverse of parse_geojson: one feature per region, rings closed, outer
// rings counterclockwise, coordinates written with round-trip precision.
inline std::string export_geojson(const MapDocument& map, const GeoJsonExportOptions& options = {}) {
  using Json = nlohmann::ordered_json;
  const auto pool = map.vertices();
  auto ring_json = [&](const Ring& ring) {
    Json coords = Json::array();
    for (std::size_t idx : ring) coords.push_back({pool[idx].x, pool[idx].y});
    coords.push_back({pool[ring.front()].x, pool[ring.front()].y});
    return coords;
  };
  Json features = Json::array();
  for (const Region& region : map.regions()) {
    Json props = Json::object();
    props[options.id_property] = region.id;
    props[options.name_property] = region.name;
    props[options.abbr_property] = region.abbreviation;
    if (options.dataset) {
      const auto v = options.dataset->value(region.id);
      props[options.dataset->name] = v ? Json(*v) : Json(nullptr);
    }
    Json polys = Json::array();
    for (const Polygon& poly : region.polygons) {
      Json rings = Json::array();
      rings.push_back(ring_json(poly.outer));
      for (const Ring& hole : poly.holes) rings.push_back(ring_json(hole));
      polys.push_back(std::move(rings));
    }
    Json geometry = Json::object();
    if (polys.size() == 1) {
      geometry["type"] = "Polygon";
      geometry["coordinates"] = std::move(polys[0]);
    } else {
      geometry["type"] = "MultiPolygon";
      geometry["coordinates"] = std::move(polys);
    }
    Json feature = Json::object();
    feature["type"] = "Feature";
    feature["properties"] = std::move(props);
    feature["geometry"] = std::move(geometry);
    features.push_back(std::move(feature));
  }
  Json doc = Json::object();
  doc["type"] = "FeatureCollection";
  doc["features"] = std::move(features);
  return doc.dump();
}

// One cartogram view for the viewer bundle.
struct BundleView {
  BoundDataset dataset;
  MapDocument cartogram;
};

inline constexpr int kAnimationMs = 1000;
inline constexpr const char* kNoData = "no data";

// The single JSON document the browser viewer consumes. Pools are stored in
// canvas pixel coordinates (y down) so the viewer only fits and
// interpolates; every view shares the same ring topology.
inline std::string build_viewer_bundle(const MapDocument& conventional,
                                       const std::vector<BundleView>& views,
                                       const ColorAssignment& colors, Canvas canvas) {
  using Json = nlohmann::ordered_json;
  if (views.empty()) throw DomainError("viewer bundle needs at least one dataset");
  std::set<std::string> names;
  for (const BundleView& view : views) {
    if (!conventional.same_structure(view.cartogram)) {
      throw StructureMismatch("cartogram \"" + view.dataset.name +
                              "\" does not share the conventional map's structure");
    }
    if (view.dataset.name == "conventional" || !names.insert(view.dataset.name).second) {
      throw DomainError("dataset name \"" + view.dataset.name + "\" is reserved or repeated");
    }
  }

  auto round3 = [](double v) { return std::round(v * 1000.0) / 1000.0; };
  auto pool_json = [&](const MapDocument& map) {
    const Viewport vp = Viewport::fit(map.bbox(), canvas);
    Json pool = Json::array();
    for (const Point& p : map.vertices()) {
      const Point px = vp.to_px(p);
      pool.push_back({round3(px.x), round3(px.y)});
    }
    return pool;
  };

  Json doc = Json::object();
  doc["version"] = 1;
  doc["canvas"] = {{"width", canvas.width}, {"height", canvas.height}};
  doc["animationMs"] = kAnimationMs;

  Json base = Json::array(), highlight = Json::array();
  const auto hl = Palette::highlight();
  for (std::size_t i = 0; i < Palette::kBase.size(); ++i) {
    base.push_back(std::string(Palette::kBase[i]));
    highlight.push_back(hl[i]);
  }
  doc["palette"] = {{"base", base},
                    {"highlight", highlight},
                    {"missing", std::string(Palette::kMissing)},
                    {"legend", std::string(Palette::kLegend)}};

  Json rings = Json::array(), regions = Json::array();
  const Topology& topo = conventional.topology();
  std::size_t ring_id = 0;
  for (const Region& region : topo.regions()) {
    Json ring_ids = Json::array(), hole_ids = Json::array();
    for (const Polygon& poly : region.polygons) {
      rings.push_back(poly.outer);
      ring_ids.push_back(ring_id++);
      for (const Ring& hole : poly.holes) {
        rings.push_back(hole);
        hole_ids.push_back(ring_id++);
      }
    }
    Json entry = Json::object();
    entry["id"] = region.id;
    entry["name"] = region.name;
    entry["abbr"] = region.abbreviation;
    entry["colorIndex"] = colors.index_of(region.id);
    entry["ringIds"] = std::move(ring_ids);
    entry["holeIds"] = std::move(hole_ids);
    const auto o = colors.overrides.find(region.id);
    if (o != colors.overrides.end()) entry["overrideColor"] = o->second;
    regions.push_back(std::move(entry));
  }
  doc["topology"] = {{"rings", std::move(rings)}, {"regions", std::move(regions)}};

  Json pools = Json::object();
  pools["conventional"] = pool_json(conventional);
  for (const BundleView& view : views) pools[view.dataset.name] = pool_json(view.cartogram);
  doc["pools"] = std::move(pools);

  Json datasets = Json::array();
  for (const BundleView& view : views) {
    const BoundDataset& ds = view.dataset;
    const LegendSpec legend = legend_for(view.cartogram, ds, canvas);
    Json values = Json::object(), display = Json::object();
    for (std::size_t i = 0; i < ds.ids.size(); ++i) {
      values[ds.ids[i]] = ds.values[i] ? Json(*ds.values[i]) : Json(nullptr);
      display[ds.ids[i]] = ds.values[i] ? format_value(*ds.values[i], ds.unit) : std::string(kNoData);
    }
    Json entry = Json::object();
    entry["name"] = ds.name;
    entry["unit"] = ds.unit;
    entry["totalLabel"] = format_value(dataset_total(ds), ds.unit);
    entry["legend"] = {{"value", legend.value}, {"sidePx", legend.side_px}, {"label", legend.label}};
    entry["values"] = std::move(values);
    entry["display"] = std::move(display);
    datasets.push_back(std::move(entry));
  }
  doc["datasets"] = std::move(datasets);
  return doc.dump();
}

}  // namespace cartogrammer
