#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cartogrammer/errors.hpp"
#include "cartogrammer/geometry.hpp"

namespace cartogrammer {

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;

  friend bool operator==(const Polygon&, const Polygon&) = default;
};

struct Region {
  std::string id;
  std::string name;
  std::string abbreviation;
  std::vector<Polygon> polygons;

  friend bool operator==(const Region&, const Region&) = default;
};

// Identifies one ring inside a map: hole == -1 means the outer ring.
struct RingRef {
  std::size_t region = 0;
  std::size_t polygon = 0;
  int hole = -1;

  friend bool operator==(const RingRef&, const RingRef&) = default;
};

// The ring structure of a map, shared between a map and every deformation
// of it. Two maps with the same Topology object are structurally identical
// by construction.
class Topology {
 public:
  explicit Topology(std::vector<Region> regions) : regions_(std::move(regions)) {
    for (std::size_t i = 0; i < regions_.size(); ++i) {
      if (regions_[i].id.empty()) throw ParseError("region with empty id");
      if (!index_.emplace(regions_[i].id, i).second) {
        throw ParseError("duplicate region id \"" + regions_[i].id + "\"");
      }
    }
  }

  const std::vector<Region>& regions() const { return regions_; }
  std::size_t size() const { return regions_.size(); }

  std::size_t index_of(const std::string& id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) throw DomainError("unknown region id \"" + id + "\"");
    return it->second;
  }
  bool contains(const std::string& id) const { return index_.count(id) != 0; }

  const Ring& ring(const RingRef& ref) const {
    const Polygon& poly = regions_[ref.region].polygons[ref.polygon];
    return ref.hole < 0 ? poly.outer : poly.holes[static_cast<std::size_t>(ref.hole)];
  }

  // Every ring in canonical order: region order, then polygon order, outer
  // ring before its holes.
  std::vector<RingRef> ring_refs() const {
    std::vector<RingRef> refs;
    for (std::size_t r = 0; r < regions_.size(); ++r) {
      const auto& polys = regions_[r].polygons;
      for (std::size_t p = 0; p < polys.size(); ++p) {
        refs.push_back({r, p, -1});
        for (std::size_t h = 0; h < polys[p].holes.size(); ++h) {
          refs.push_back({r, p, static_cast<int>(h)});
        }
      }
    }
    return refs;
  }

  std::string describe(const RingRef& ref) const {
    std::string out = "region \"" + regions_[ref.region].id + "\" polygon " +
                      std::to_string(ref.polygon);
    out += ref.hole < 0 ? " outer ring" : " hole " + std::to_string(ref.hole);
    return out;
  }

  friend bool operator==(const Topology& a, const Topology& b) {
    return a.regions_ == b.regions_;
  }

 private:
  std::vector<Region> regions_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Planar regions over a shared vertex pool. Immutable once built; the
// engine derives deformed copies through with_vertices().
class MapDocument {
 public:
  MapDocument(std::shared_ptr<const Topology> topology, std::vector<Point> pool,
              std::string units_note = {})
      : topology_(std::move(topology)),
        pool_(std::move(pool)),
        bbox_(bbox_of(pool_)),
        units_note_(std::move(units_note)) {
    for (const RingRef& ref : topology_->ring_refs()) {
      for (std::size_t idx : topology_->ring(ref)) {
        if (idx >= pool_.size()) {
          throw ParseError("ring index out of range in " + topology_->describe(ref));
        }
      }
    }
  }

  const std::vector<Region>& regions() const { return topology_->regions(); }
  const Topology& topology() const { return *topology_; }
  const std::shared_ptr<const Topology>& shared_topology() const { return topology_; }
  std::span<const Point> vertices() const { return pool_; }
  const BBox& bbox() const { return bbox_; }
  const std::string& units_note() const { return units_note_; }
  std::size_t region_count() const { return topology_->size(); }
  std::size_t index_of(const std::string& id) const { return topology_->index_of(id); }

  // Same topology, new vertex positions.
  MapDocument with_vertices(std::vector<Point> pool) const {
    if (pool.size() != pool_.size()) {
      throw StructureMismatch("vertex pool length changed from " +
                              std::to_string(pool_.size()) + " to " +
                              std::to_string(pool.size()));
    }
    return MapDocument(topology_, std::move(pool), units_note_);
  }

  // Same pool length and identical ring indexing.
  bool same_structure(const MapDocument& other) const {
    return pool_.size() == other.pool_.size() &&
           (topology_ == other.topology_ || *topology_ == *other.topology_);
  }

 private:
  std::shared_ptr<const Topology> topology_;
  std::vector<Point> pool_;
  BBox bbox_;
  std::string units_note_;
};

inline double area_by_index(const MapDocument& map, std::size_t region) {
  const auto pool = map.vertices();
  double total = 0.0;
  for (const Polygon& poly : map.regions()[region].polygons) {
    total += std::abs(signed_area(poly.outer, pool));
    for (const Ring& hole : poly.holes) total -= std::abs(signed_area(hole, pool));
  }
  return total;
}

inline double region_area(const MapDocument& map, const std::string& id) {
  return area_by_index(map, map.index_of(id));
}

// Areas of all regions in region order.
inline std::vector<double> region_areas(const MapDocument& map) {
  std::vector<double> out(map.region_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = area_by_index(map, i);
  return out;
}

inline double total_area(const MapDocument& map) {
  double total = 0.0;
  for (double a : region_areas(map)) total += a;
  return total;
}

// Area-weighted centroid; holes contribute negatively because they are
// stored clockwise.
inline Point centroid_by_index(const MapDocument& map, std::size_t region) {
  const auto pool = map.vertices();
  double area = 0.0;
  Point moment;
  for (const Polygon& poly : map.regions()[region].polygons) {
    const RingMoment outer = ring_moment(poly.outer, pool);
    area += outer.area;
    moment = moment + outer.moment;
    for (const Ring& hole : poly.holes) {
      const RingMoment h = ring_moment(hole, pool);
      area += h.area;
      moment = moment + h.moment;
    }
  }
  if (!(area > 0.0)) {
    throw DomainError("region \"" + map.regions()[region].id + "\" has non-positive area");
  }
  return (1.0 / area) * moment;
}

inline Point region_centroid(const MapDocument& map, const std::string& id) {
  return centroid_by_index(map, map.index_of(id));
}

}  // namespace cartogrammer
