#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cartogrammer/errors.hpp"
#include "cartogrammer/topology.hpp"

namespace cartogrammer {

struct Rgb {
  int r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline Rgb parse_hex(std::string_view hex) {
  auto nibble = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw DomainError("invalid hex color \"" + std::string(hex) + "\"");
  };
  if (hex.size() != 7 || hex[0] != '#') throw DomainError("invalid hex color \"" + std::string(hex) + "\"");
  return {nibble(hex[1]) * 16 + nibble(hex[2]), nibble(hex[3]) * 16 + nibble(hex[4]),
          nibble(hex[5]) * 16 + nibble(hex[6])};
}

inline std::string to_hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", c.r, c.g, c.b);
  return buf;
}

// Raises HSL lightness by `delta` (a fraction), capped at `ceiling`.
inline std::string lighten(std::string_view hex, double delta, double ceiling) {
  const Rgb c = parse_hex(hex);
  const double r = c.r / 255.0, g = c.g / 255.0, b = c.b / 255.0;
  const double hi = std::max({r, g, b});
  const double lo = std::min({r, g, b});
  const double light = 0.5 * (hi + lo);
  double hue = 0.0, sat = 0.0;
  if (hi != lo) {
    const double span = hi - lo;
    sat = light > 0.5 ? span / (2.0 - hi - lo) : span / (hi + lo);
    if (hi == r) {
      hue = (g - b) / span + (g < b ? 6.0 : 0.0);
    } else if (hi == g) {
      hue = (b - r) / span + 2.0;
    } else {
      hue = (r - g) / span + 4.0;
    }
    hue /= 6.0;
  }
  const double l2 = std::min(light + delta, ceiling);
  auto channel = [](double p, double q, double t) {
    if (t < 0.0) t += 1.0;
    if (t > 1.0) t -= 1.0;
    if (t < 1.0 / 6.0) return p + (q - p) * 6.0 * t;
    if (t < 0.5) return q;
    if (t < 2.0 / 3.0) return p + (q - p) * (2.0 / 3.0 - t) * 6.0;
    return p;
  };
  double r2 = l2, g2 = l2, b2 = l2;
  if (sat != 0.0) {
    const double q = l2 < 0.5 ? l2 * (1.0 + sat) : l2 + sat - l2 * sat;
    const double p = 2.0 * l2 - q;
    r2 = channel(p, q, hue + 1.0 / 3.0);
    g2 = channel(p, q, hue);
    b2 = channel(p, q, hue - 1.0 / 3.0);
  }
  auto byte = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  return to_hex({byte(r2), byte(g2), byte(b2)});
}

// Six-class Dark2 scheme, its hover highlights, and the two reserved grays.
struct Palette {
  static constexpr std::array<std::string_view, 6> kBase{"#1B9E77", "#D95F02", "#7570B3",
                                                         "#E7298A", "#66A61E", "#E6AB02"};
  static constexpr std::string_view kMissing = "#CCCCCC";
  static constexpr std::string_view kLegend = "#707070";
  static constexpr std::size_t kPinkIndex = 3;
  static constexpr std::string_view kPinkHighlight = "#FF5CBD";

  static std::array<std::string, 6> highlight() {
    std::array<std::string, 6> out;
    for (std::size_t i = 0; i < kBase.size(); ++i) {
      out[i] = i == kPinkIndex ? std::string(kPinkHighlight) : lighten(kBase[i], 0.15, 0.95);
    }
    return out;
  }
};

struct ColorAssignment {
  std::map<std::string, int> index;
  // Regions whose fill was chosen by the user; their index is the nearest
  // palette entry and still participates in conflict checks.
  std::map<std::string, std::string> overrides;

  int index_of(const std::string& id) const {
    const auto it = index.find(id);
    if (it == index.end()) throw DomainError("no color assigned to \"" + id + "\"");
    return it->second;
  }

  std::string fill(const std::string& id, bool missing = false) const {
    if (missing) return std::string(Palette::kMissing);
    const auto o = overrides.find(id);
    if (o != overrides.end()) return o->second;
    return std::string(Palette::kBase[static_cast<std::size_t>(index_of(id))]);
  }

  std::size_t distinct_indices() const {
    std::set<int> used;
    for (const auto& [id, i] : index) used.insert(i);
    return used.size();
  }
};

inline int nearest_palette_index(std::string_view hex) {
  const Rgb c = parse_hex(hex);
  int best = 0;
  long best_d = std::numeric_limits<long>::max();
  for (std::size_t i = 0; i < Palette::kBase.size(); ++i) {
    const Rgb p = parse_hex(Palette::kBase[i]);
    const long d = long(c.r - p.r) * (c.r - p.r) + long(c.g - p.g) * (c.g - p.g) +
                   long(c.b - p.b) * (c.b - p.b);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

// Smallest-last ordering: repeatedly remove a vertex of minimum remaining
// degree (ties: largest id first) and color in reverse removal order. Every
// vertex then has at most degeneracy-many colored neighbors when it is
// colored, so planar maps (5-degenerate) never need more than six indices.
inline std::vector<std::string> smallest_last_order(const AdjacencyGraph& graph) {
  std::map<std::string, std::set<std::string>> remaining;
  for (const auto& id : graph.nodes) remaining[id];
  for (const auto& [a, b] : graph.edges) {
    remaining[a].insert(b);
    remaining[b].insert(a);
  }
  std::vector<std::string> removal;
  while (!remaining.empty()) {
    auto pick = remaining.begin();
    for (auto it = remaining.begin(); it != remaining.end(); ++it) {
      if (it->second.size() <= pick->second.size()) pick = it;
    }
    const std::string id = pick->first;
    for (const auto& n : pick->second) remaining[n].erase(id);
    remaining.erase(pick);
    removal.push_back(id);
  }
  return {removal.rbegin(), removal.rend()};
}

inline ColorAssignment assign_colors(const AdjacencyGraph& graph,
                                     const std::map<std::string, std::string>& overrides = {}) {
  ColorAssignment out;
  const Rgb missing = parse_hex(Palette::kMissing);
  for (const auto& [id, hex] : overrides) {
    if (std::find(graph.nodes.begin(), graph.nodes.end(), id) == graph.nodes.end()) {
      throw DomainError("color override for unknown region \"" + id + "\"");
    }
    if (parse_hex(hex) == missing) {
      throw DomainError("color " + hex + " is reserved for missing data");
    }
    const std::string normalized = to_hex(parse_hex(hex));
    out.overrides[id] = normalized;
    out.index[id] = nearest_palette_index(normalized);
  }

  constexpr int kColors = static_cast<int>(Palette::kBase.size());
  for (const std::string& id : smallest_last_order(graph)) {
    if (out.index.count(id)) continue;
    std::array<int, kColors> conflicts{};
    for (const std::string& n : graph.neighbors(id)) {
      const auto it = out.index.find(n);
      if (it != out.index.end()) ++conflicts[static_cast<std::size_t>(it->second)];
    }
    // Lowest free index; with overrides in play fall back to the least
    // conflicting one.
    const auto best = std::min_element(conflicts.begin(), conflicts.end());
    out.index[id] = static_cast<int>(best - conflicts.begin());
  }
  return out;
}

}  // namespace cartogrammer
