#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cartogrammer/map_document.hpp"
#include "cartogrammer/topology.hpp"

namespace cartogrammer {

struct GeoJsonOptions {
  std::string id_property = "id";
  std::string name_property = "name";
  std::string abbr_property = "abbr";
  // When set, vertices closer than snap_tolerance * bbox diagonal are merged.
  // Left unset, only exactly equal coordinates merge.
  std::optional<double> snap_tolerance;
  std::string units_note = "planar map units";
};

inline constexpr double kDefaultSnapTolerance = 1e-9;

namespace detail {

using Json = nlohmann::json;

inline std::string property_string(const Json& feature, const std::string& key) {
  const auto props = feature.find("properties");
  if (props != feature.end() && props->is_object()) {
    const auto it = props->find(key);
    if (it != props->end()) {
      if (it->is_string()) return it->get<std::string>();
      if (it->is_number_integer()) return std::to_string(it->get<long long>());
      if (it->is_number()) return it->dump();
    }
  }
  if (key == "id") {
    const auto it = feature.find("id");
    if (it != feature.end()) {
      if (it->is_string()) return it->get<std::string>();
      if (it->is_number()) return it->dump();
    }
  }
  return {};
}

using RawRing = std::vector<Point>;
using RawPolygon = std::vector<RawRing>;

inline RawRing read_ring(const Json& coords, const std::string& id) {
  if (!coords.is_array()) throw ParseError("malformed GeoJSON: ring of \"" + id + "\" is not an array");
  RawRing ring;
  for (const Json& pos : coords) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
      throw ParseError("malformed GeoJSON: bad position in \"" + id + "\"");
    }
    const Point p{pos[0].get<double>(), pos[1].get<double>()};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ParseError("malformed GeoJSON: non-finite coordinate in \"" + id + "\"");
    }
    if (ring.empty() || !(ring.back() == p)) ring.push_back(p);
  }
  while (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  return ring;
}

inline std::vector<RawPolygon> read_geometry(const Json& feature, const std::string& id) {
  const auto geom = feature.find("geometry");
  if (geom == feature.end() || !geom->is_object()) {
    throw ParseError("non-polygonal geometry: feature \"" + id + "\" has no geometry");
  }
  const std::string type = geom->value("type", "");
  const auto coords = geom->find("coordinates");
  std::vector<RawPolygon> out;
  auto read_polygon = [&](const Json& rings) {
    if (!rings.is_array() || rings.empty()) {
      throw ParseError("malformed GeoJSON: empty polygon in \"" + id + "\"");
    }
    RawPolygon poly;
    for (const Json& r : rings) poly.push_back(read_ring(r, id));
    out.push_back(std::move(poly));
  };
  if (type == "Polygon") {
    if (coords == geom->end()) throw ParseError("malformed GeoJSON: missing coordinates");
    read_polygon(*coords);
  } else if (type == "MultiPolygon") {
    if (coords == geom->end() || !coords->is_array()) {
      throw ParseError("malformed GeoJSON: missing coordinates");
    }
    for (const Json& p : *coords) read_polygon(p);
  } else {
    throw ParseError("non-polygonal geometry: feature \"" + id + "\" is " +
                     (type.empty() ? std::string("untyped") : type));
  }
  return out;
}

// Deduplicates coordinates into a pool, either exactly or on a snapping grid.
class VertexPool {
 public:
  explicit VertexPool(double tolerance) : tol_(tolerance) {}

  std::size_t insert(Point p) {
    if (tol_ <= 0.0) {
      const auto [it, fresh] = exact_.try_emplace(key(p), points_.size());
      if (fresh) points_.push_back(p);
      return it->second;
    }
    const auto cx = static_cast<std::int64_t>(std::floor(p.x / tol_));
    const auto cy = static_cast<std::int64_t>(std::floor(p.y / tol_));
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = grid_.find({cx + dx, cy + dy});
        if (it == grid_.end()) continue;
        for (std::size_t idx : it->second) {
          if (norm(points_[idx] - p) <= tol_) return idx;
        }
      }
    }
    grid_[{cx, cy}].push_back(points_.size());
    points_.push_back(p);
    return points_.size() - 1;
  }

  std::vector<Point> release() { return std::move(points_); }

 private:
  // +0.0 turns -0.0 into 0.0 so both spellings merge.
  static std::pair<double, double> key(Point p) { return {p.x + 0.0, p.y + 0.0}; }

  double tol_;
  std::vector<Point> points_;
  std::map<std::pair<double, double>, std::size_t> exact_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> grid_;
};

inline Ring pool_ring(const RawRing& raw, VertexPool& pool) {
  Ring ring;
  for (const Point& p : raw) {
    const std::size_t idx = pool.insert(p);
    if (ring.empty() || ring.back() != idx) ring.push_back(idx);
  }
  while (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  return ring;
}

}  // namespace detail

// Reads an RFC 7946 FeatureCollection of Polygon / MultiPolygon features.
// Equal coordinates collapse into one pool vertex, so borders shared by
// neighboring regions become literally the same vertices. Outer rings are
// normalized to counterclockwise and holes to clockwise.
inline MapDocument parse_geojson(std::string_view text, const GeoJsonOptions& options = {}) {
  using detail::Json;
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed GeoJSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw ParseError("malformed GeoJSON: expected a FeatureCollection");
  }

  struct RawRegion {
    std::string id, name, abbr;
    std::vector<detail::RawPolygon> polygons;
  };
  std::vector<RawRegion> raw;
  BBox raw_box;
  for (const Json& feature : doc["features"]) {
    if (!feature.is_object()) throw ParseError("malformed GeoJSON: feature is not an object");
    RawRegion region;
    region.id = detail::property_string(feature, options.id_property);
    if (region.id.empty()) {
      throw ParseError("feature without id property \"" + options.id_property + "\"");
    }
    region.name = detail::property_string(feature, options.name_property);
    region.abbr = detail::property_string(feature, options.abbr_property);
    if (region.name.empty()) region.name = region.id;
    if (region.abbr.empty()) region.abbr = region.id;
    region.polygons = detail::read_geometry(feature, region.id);
    for (const auto& poly : region.polygons) {
      for (const auto& ring : poly) {
        for (const Point& p : ring) raw_box.extend(p);
      }
    }
    raw.push_back(std::move(region));
  }

  const double tol = options.snap_tolerance ? *options.snap_tolerance * raw_box.diagonal() : 0.0;
  detail::VertexPool pool(tol);
  std::vector<Region> regions;
  for (const RawRegion& r : raw) {
    Region region{r.id, r.name, r.abbr, {}};
    for (const auto& raw_poly : r.polygons) {
      Polygon poly;
      for (std::size_t k = 0; k < raw_poly.size(); ++k) {
        Ring ring = detail::pool_ring(raw_poly[k], pool);
        if (ring.size() < 3) {
          throw ParseError("ring with fewer than 3 distinct vertices in \"" + r.id + "\"");
        }
        if (k == 0) {
          poly.outer = std::move(ring);
        } else {
          poly.holes.push_back(std::move(ring));
        }
      }
      region.polygons.push_back(std::move(poly));
    }
    regions.push_back(std::move(region));
  }

  std::vector<Point> vertices = pool.release();
  for (Region& region : regions) {
    for (Polygon& poly : region.polygons) {
      if (signed_area(poly.outer, vertices) < 0.0) std::reverse(poly.outer.begin(), poly.outer.end());
      for (Ring& hole : poly.holes) {
        if (signed_area(hole, vertices) > 0.0) std::reverse(hole.begin(), hole.end());
      }
    }
  }
  // Renumber by first appearance in the normalized rings, so exporting and
  // re-parsing reproduces the same indices.
  {
    std::vector<std::size_t> remap(vertices.size(), SIZE_MAX);
    std::vector<Point> ordered;
    ordered.reserve(vertices.size());
    auto renumber = [&](Ring& ring) {
      for (std::size_t& idx : ring) {
        if (remap[idx] == SIZE_MAX) {
          remap[idx] = ordered.size();
          ordered.push_back(vertices[idx]);
        }
        idx = remap[idx];
      }
    };
    for (Region& region : regions) {
      for (Polygon& poly : region.polygons) {
        renumber(poly.outer);
        for (Ring& hole : poly.holes) renumber(hole);
      }
    }
    vertices = std::move(ordered);
  }
  for (Region& region : regions) {
    for (Polygon& poly : region.polygons) {
      if (!ring_is_simple(poly.outer, vertices)) {
        throw ParseError("self-intersecting ring in \"" + region.id + "\"");
      }
      for (const Ring& hole : poly.holes) {
        if (!ring_is_simple(hole, vertices)) {
          throw ParseError("self-intersecting hole in \"" + region.id + "\"");
        }
      }
    }
  }

  auto topology = std::make_shared<const Topology>(std::move(regions));
  MapDocument map(std::move(topology), std::move(vertices), options.units_note);
  for (std::size_t i = 0; i < map.region_count(); ++i) {
    if (!(area_by_index(map, i) > 0.0)) {
      throw ParseError("region \"" + map.regions()[i].id + "\" has non-positive area");
    }
  }
  return map;
}

struct ProjectionOptions {
  double earth_radius = 6371.0088;  // km, mean radius
  // Defaults to the latitude of the bounding-box center.
  std::optional<double> standard_parallel_deg;
};

// Cylindrical equal-area projection of a lon/lat FeatureCollection. Only
// Polygon and MultiPolygon coordinates are transformed; properties pass
// through untouched. Output units are those of earth_radius (km by default).
inline std::string project_cea(std::string_view lonlat_text, const ProjectionOptions& options = {}) {
  using detail::Json;
  Json doc;
  try {
    doc = Json::parse(lonlat_text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed GeoJSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_array()) {
    throw ParseError("malformed GeoJSON: expected a FeatureCollection");
  }

  auto for_each_position = [&](auto&& fn) {
    for (Json& feature : doc["features"]) {
      if (!feature.contains("geometry") || !feature["geometry"].is_object()) continue;
      Json& geom = feature["geometry"];
      const std::string type = geom.value("type", "");
      if (!geom.contains("coordinates")) continue;
      Json& coords = geom["coordinates"];
      auto on_rings = [&](Json& rings) {
        for (Json& ring : rings) {
          for (Json& pos : ring) fn(pos);
        }
      };
      if (type == "Polygon") {
        on_rings(coords);
      } else if (type == "MultiPolygon") {
        for (Json& poly : coords) on_rings(poly);
      }
    }
  };

  BBox box;
  for_each_position([&](Json& pos) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
      throw ParseError("malformed GeoJSON: bad position");
    }
    const double lon = pos[0].get<double>();
    const double lat = pos[1].get<double>();
    if (!(lon >= -180.0 && lon <= 180.0) || !(lat > -90.0 && lat < 90.0)) {
      throw DomainError("coordinates out of range: (" + pos[0].dump() + ", " + pos[1].dump() + ")");
    }
    box.extend({lon, lat});
  });
  if (box.empty()) throw ParseError("malformed GeoJSON: no polygon coordinates");

  const double deg = std::numbers::pi / 180.0;
  const double phi0 = options.standard_parallel_deg.value_or(box.center().y) * deg;
  const double cos0 = std::cos(phi0);
  if (!(cos0 > 0.0)) throw DomainError("standard parallel must lie strictly between the poles");
  const double radius = options.earth_radius;
  for_each_position([&](Json& pos) {
    const double lon = pos[0].get<double>() * deg;
    const double lat = pos[1].get<double>() * deg;
    pos = Json::array({radius * lon * cos0, radius * std::sin(lat) / cos0});
  });
  return doc.dump();
}

}  // namespace cartogrammer
