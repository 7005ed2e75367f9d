#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cartogrammer/map_document.hpp"

namespace cartogrammer {

struct AdjacencyGraph {
  std::vector<std::string> nodes;
  // Unordered pairs stored with first < second.
  std::set<std::pair<std::string, std::string>> edges;

  bool adjacent(const std::string& a, const std::string& b) const {
    return a < b ? edges.count({a, b}) != 0 : edges.count({b, a}) != 0;
  }

  std::vector<std::string> neighbors(const std::string& id) const {
    std::vector<std::string> out;
    for (const auto& [a, b] : edges) {
      if (a == id) out.push_back(b);
      if (b == id) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

// Two regions are neighbors iff their rings share an undirected pool edge,
// i.e. a boundary of positive length. Depends on indices only, never on
// coordinates.
inline AdjacencyGraph build_adjacency(const MapDocument& map) {
  AdjacencyGraph graph;
  std::map<std::pair<std::size_t, std::size_t>, std::set<std::size_t>> owners;
  const Topology& topo = map.topology();
  for (const RingRef& ref : topo.ring_refs()) {
    const Ring& ring = topo.ring(ref);
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const std::size_t a = ring[i];
      const std::size_t b = ring[(i + 1) % ring.size()];
      owners[{std::min(a, b), std::max(a, b)}].insert(ref.region);
    }
  }
  for (const Region& region : map.regions()) graph.nodes.push_back(region.id);
  for (const auto& [edge, regions] : owners) {
    for (auto i = regions.begin(); i != regions.end(); ++i) {
      for (auto j = std::next(i); j != regions.end(); ++j) {
        const std::string& a = map.regions()[*i].id;
        const std::string& b = map.regions()[*j].id;
        graph.edges.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
      }
    }
  }
  return graph;
}

// A pair of boundary segments that touch or cross where they should not.
struct Crossing {
  RingRef first;
  RingRef second;
  bool same_ring() const { return first == second; }
};

namespace detail {

struct Segment {
  std::size_t a = 0;
  std::size_t b = 0;
  RingRef ring;
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
};

inline std::optional<Crossing> find_crossing(std::vector<Segment> segs,
                                             std::span<const Point> pool) {
  std::sort(segs.begin(), segs.end(), [](const Segment& s, const Segment& t) {
    return s.xmin < t.xmin || (s.xmin == t.xmin && (s.a < t.a || (s.a == t.a && s.b < t.b)));
  });
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Segment& s = segs[i];
    if (pool[s.a] == pool[s.b]) return Crossing{s.ring, s.ring};
    for (std::size_t j = i + 1; j < segs.size() && segs[j].xmin <= s.xmax; ++j) {
      const Segment& t = segs[j];
      if (t.ymin > s.ymax || t.ymax < s.ymin) continue;
      bool bad = false;
      if (s.a == t.a) {
        bad = shared_endpoint_overlap(pool[s.a], pool[s.b], pool[t.b]);
      } else if (s.a == t.b) {
        bad = shared_endpoint_overlap(pool[s.a], pool[s.b], pool[t.a]);
      } else if (s.b == t.a) {
        bad = shared_endpoint_overlap(pool[s.b], pool[s.a], pool[t.b]);
      } else if (s.b == t.b) {
        bad = shared_endpoint_overlap(pool[s.b], pool[s.a], pool[t.a]);
      } else {
        bad = segments_intersect(pool[s.a], pool[s.b], pool[t.a], pool[t.b]);
      }
      if (bad) return Crossing{s.ring, t.ring};
    }
  }
  return std::nullopt;
}

inline void append_segments(const Ring& ring, const RingRef& ref, std::span<const Point> pool,
                            std::vector<Segment>& out) {
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const std::size_t a = ring[i];
    const std::size_t b = ring[(i + 1) % ring.size()];
    Segment seg{std::min(a, b), std::max(a, b), ref, 0, 0, 0, 0};
    seg.xmin = std::min(pool[a].x, pool[b].x);
    seg.xmax = std::max(pool[a].x, pool[b].x);
    seg.ymin = std::min(pool[a].y, pool[b].y);
    seg.ymax = std::max(pool[a].y, pool[b].y);
    out.push_back(seg);
  }
}

inline bool has_repeated_index(Ring ring) {
  std::sort(ring.begin(), ring.end());
  return std::adjacent_find(ring.begin(), ring.end()) != ring.end();
}

}  // namespace detail

// A ring is simple when no vertex repeats and no two of its edges meet
// except consecutive edges at their shared vertex.
inline bool ring_is_simple(const Ring& ring, std::span<const Point> pool) {
  if (ring.size() < 3 || detail::has_repeated_index(ring)) return false;
  std::vector<detail::Segment> segs;
  detail::append_segments(ring, RingRef{}, pool, segs);
  return !detail::find_crossing(std::move(segs), pool).has_value();
}

// Searches the whole map for a pair of boundary segments that meet anywhere
// other than at a shared pool vertex. Shared borders are tested once.
inline std::optional<Crossing> find_map_crossing(const MapDocument& map) {
  const Topology& topo = map.topology();
  const auto pool = map.vertices();
  std::vector<detail::Segment> segs;
  for (const RingRef& ref : topo.ring_refs()) {
    const Ring& ring = topo.ring(ref);
    if (detail::has_repeated_index(ring)) return Crossing{ref, ref};
    detail::append_segments(ring, ref, pool, segs);
  }
  std::sort(segs.begin(), segs.end(), [](const detail::Segment& s, const detail::Segment& t) {
    return s.a < t.a || (s.a == t.a && s.b < t.b);
  });
  segs.erase(std::unique(segs.begin(), segs.end(),
                         [](const detail::Segment& s, const detail::Segment& t) {
                           return s.a == t.a && s.b == t.b;
                         }),
             segs.end());
  return detail::find_crossing(std::move(segs), pool);
}

struct TopologyReport {
  bool structure_matches = true;
  bool adjacency_preserved = true;
  // No ring of `after` intersects itself.
  bool all_rings_simple = true;
  // No two different rings of `after` cross; shared borders stay shared.
  bool no_ring_crossings = true;
  // Every outer ring keeps counterclockwise orientation, every hole
  // clockwise, and every region has positive area.
  bool all_areas_positive = true;
  std::optional<RingRef> offending_ring;
  std::string detail;

  bool passed() const {
    return structure_matches && adjacency_preserved && all_rings_simple && no_ring_crossings &&
           all_areas_positive;
  }
};

inline TopologyReport verify_topology(const MapDocument& before, const MapDocument& after) {
  TopologyReport report;
  if (!before.same_structure(after)) {
    report.structure_matches = false;
    report.adjacency_preserved = false;
    report.detail = before.vertices().size() != after.vertices().size()
                        ? "vertex pool length differs (" +
                              std::to_string(before.vertices().size()) + " vs " +
                              std::to_string(after.vertices().size()) + ")"
                        : "ring indexing differs";
    return report;
  }
  if (build_adjacency(before).edges != build_adjacency(after).edges) {
    report.adjacency_preserved = false;
    report.detail = "adjacency changed";
  }

  const Topology& topo = after.topology();
  const auto pool = after.vertices();
  for (const RingRef& ref : topo.ring_refs()) {
    const double a = signed_area(topo.ring(ref), pool);
    if ((ref.hole < 0 && !(a > 0.0)) || (ref.hole >= 0 && !(a < 0.0))) {
      report.all_areas_positive = false;
      report.offending_ring = ref;
      report.detail = topo.describe(ref) + " flipped orientation or collapsed";
      break;
    }
  }
  if (report.all_areas_positive) {
    for (std::size_t r = 0; r < after.region_count(); ++r) {
      if (!(area_by_index(after, r) > 0.0)) {
        report.all_areas_positive = false;
        report.offending_ring = RingRef{r, 0, -1};
        report.detail = "region \"" + topo.regions()[r].id + "\" has non-positive area";
        break;
      }
    }
  }

  for (const RingRef& ref : topo.ring_refs()) {
    if (!ring_is_simple(topo.ring(ref), pool)) {
      report.all_rings_simple = false;
      report.offending_ring = ref;
      report.detail = topo.describe(ref) + " intersects itself";
      return report;
    }
  }
  if (auto hit = find_map_crossing(after)) {
    report.no_ring_crossings = false;
    report.offending_ring = hit->first;
    report.detail = hit->same_ring() ? topo.describe(hit->first) + " touches itself"
                                     : topo.describe(hit->first) + " crosses " +
                                           topo.describe(hit->second);
  }
  return report;
}

}  // namespace cartogrammer
