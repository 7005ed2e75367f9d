#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cartogrammer/color.hpp"
#include "cartogrammer/errors.hpp"
#include "cartogrammer/format.hpp"
#include "cartogrammer/map_document.hpp"

namespace cartogrammer {

// One value column of the input CSV. std::nullopt marks a missing entry.
struct Dataset {
  std::string name;
  std::string unit;
  std::vector<std::string> ids;  // CSV row order
  std::map<std::string, std::optional<double>> entries;
};

namespace detail {

// RFC 4180 records: quoted fields may contain commas, quotes ("") and
// line breaks. Blank lines are skipped.
inline std::vector<std::vector<std::string>> csv_records(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, field_started = false;
  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    const bool blank = row.size() == 1 && row[0].empty() && !field_started;
    if (!blank) rows.push_back(std::move(row));
    row.clear();
    field_started = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_row();
    } else if (c == '\n') {
      end_row();
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw ParseError("CSV: unterminated quoted field");
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

// First column holds region ids; every further column is one dataset whose
// header reads "Name (unit)" or just "Name".
inline std::vector<Dataset> parse_csv(std::string_view text) {
  const auto rows = detail::csv_records(text);
  if (rows.empty()) throw ParseError("CSV: missing header row");
  const auto& header = rows.front();
  if (header.size() < 2) throw ParseError("CSV: no value columns");

  static const std::regex kHeader(R"(^(.*?)\s*\(([^()]*)\)$)");
  static const std::regex kNumber(R"(^[+-]?(\d+(\.\d*)?|\.\d+)$)");

  std::vector<Dataset> datasets(header.size() - 1);
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string h = detail::trim(header[c]);
    std::smatch m;
    if (std::regex_match(h, m, kHeader)) {
      datasets[c - 1].name = detail::trim(m[1].str());
      datasets[c - 1].unit = detail::trim(m[2].str());
    } else {
      datasets[c - 1].name = h;
    }
    if (datasets[c - 1].name.empty()) {
      throw ParseError("CSV: column " + std::to_string(c + 1) + " has an empty header");
    }
  }

  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string line = "CSV line " + std::to_string(r + 1);
    if (row.size() != header.size()) {
      throw ParseError(line + ": expected " + std::to_string(header.size()) + " fields, got " +
                       std::to_string(row.size()));
    }
    const std::string id = detail::trim(row[0]);
    if (id.empty()) throw ParseError(line + ": empty region id");
    if (!seen.insert(id).second) throw ParseError(line + ": duplicate region id \"" + id + "\"");
    for (std::size_t c = 1; c < row.size(); ++c) {
      Dataset& ds = datasets[c - 1];
      ds.ids.push_back(id);
      const std::string cell = detail::trim(row[c]);
      if (cell.empty()) {
        ds.entries[id] = std::nullopt;
        continue;
      }
      if (!std::regex_match(cell, kNumber)) {
        throw ParseError(line + ": non-numeric value \"" + cell + "\" for \"" + id + "\"");
      }
      const double v = std::stod(cell);
      if (v < 0.0) throw ParseError(line + ": negative value for \"" + id + "\"");
      if (!std::isfinite(v)) throw ParseError(line + ": non-finite value for \"" + id + "\"");
      ds.entries[id] = v == 0.0 ? 0.0 : v;
    }
  }
  return datasets;
}

// A dataset aligned with a map's region order.
struct BoundDataset {
  std::string name;
  std::string unit;
  std::vector<std::string> ids;                // map region order
  std::vector<std::optional<double>> values;   // parallel to ids
  std::vector<std::string> warnings;

  std::optional<double> value(const std::string& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] == id) return values[i];
    }
    throw DomainError("unknown region id \"" + id + "\"");
  }
  bool missing(std::size_t i) const { return !values[i].has_value(); }
  std::size_t missing_count() const {
    std::size_t n = 0;
    for (const auto& v : values) n += !v.has_value();
    return n;
  }
};

inline BoundDataset bind(const MapDocument& map, const Dataset& dataset) {
  for (const std::string& id : dataset.ids) {
    if (!map.topology().contains(id)) {
      throw BindError("dataset \"" + dataset.name + "\": region \"" + id + "\" is not on the map");
    }
  }
  BoundDataset out{dataset.name, dataset.unit, {}, {}, {}};
  for (const Region& region : map.regions()) {
    out.ids.push_back(region.id);
    const auto it = dataset.entries.find(region.id);
    if (it == dataset.entries.end() || !it->second) {
      out.values.push_back(std::nullopt);
      out.warnings.push_back(region.id + ": no data — area will be preserved");
    } else {
      out.values.push_back(*it->second);
    }
  }
  return out;
}

struct AdditivitySummary {
  double total = 0.0;
  std::string formatted_total;
  std::map<std::string, double> slice_shares;  // non-missing regions only
  std::vector<std::string> slice_order;        // map region order
  std::string confirmation_prompt;
};

inline constexpr std::string_view kMeaningfulQuestion = "Is this a meaningful quantity?";

// Pie-chart summary shown before any cartogram is computed; the caller must
// obtain the user's confirmation that the total makes sense.
inline AdditivitySummary additivity_summary(const BoundDataset& bound) {
  AdditivitySummary out;
  for (std::size_t i = 0; i < bound.ids.size(); ++i) {
    if (bound.values[i]) out.total += *bound.values[i];
  }
  for (std::size_t i = 0; i < bound.ids.size(); ++i) {
    if (!bound.values[i]) continue;
    out.slice_order.push_back(bound.ids[i]);
    out.slice_shares[bound.ids[i]] = out.total > 0.0 ? *bound.values[i] / out.total : 0.0;
  }
  out.formatted_total = format_value(out.total, bound.unit);
  out.confirmation_prompt = "The values of \"" + bound.name + "\" add up to " +
                            out.formatted_total + ". " + std::string(kMeaningfulQuestion);
  return out;
}

struct TargetAreas {
  std::vector<std::string> ids;  // map region order
  std::vector<double> areas;
  double total_area = 0.0;

  double at(const std::string& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] == id) return areas[i];
    }
    throw DomainError("unknown region id \"" + id + "\"");
  }
};

// Missing regions keep their conventional area; the remaining area is split
// among the other regions in proportion to their values.
inline TargetAreas compute_target_areas(const MapDocument& map, const BoundDataset& bound) {
  if (bound.ids.size() != map.region_count()) {
    throw BindError("dataset \"" + bound.name + "\" is bound to a different map");
  }
  const std::vector<double> areas = region_areas(map);
  TargetAreas out;
  out.ids = bound.ids;
  double missing_area = 0.0, value_sum = 0.0;
  for (std::size_t i = 0; i < areas.size(); ++i) {
    out.total_area += areas[i];
    if (!bound.values[i]) {
      missing_area += areas[i];
    } else if (*bound.values[i] == 0.0) {
      throw DomainError("dataset \"" + bound.name + "\": region \"" + bound.ids[i] +
                        "\" has value 0; remove it or leave the cell empty");
    } else {
      value_sum += *bound.values[i];
    }
  }
  if (!(value_sum > 0.0)) throw DomainError("dataset \"" + bound.name + "\": all regions missing");
  const double share_area = out.total_area - missing_area;
  out.areas.resize(areas.size());
  for (std::size_t i = 0; i < areas.size(); ++i) {
    out.areas[i] = bound.values[i] ? share_area * (*bound.values[i] / value_sum) : areas[i];
  }
  return out;
}

struct PieSlice {
  std::string id;
  double start_deg = 0.0;  // clockwise from 12 o'clock
  double end_deg = 0.0;
};

inline std::vector<PieSlice> pie_slices(const AdditivitySummary& summary) {
  std::vector<PieSlice> out;
  double angle = 0.0;
  for (const std::string& id : summary.slice_order) {
    const double sweep = 360.0 * summary.slice_shares.at(id);
    out.push_back({id, angle, angle + sweep});
    angle += sweep;
  }
  if (!out.empty()) out.back().end_deg = 360.0;
  return out;
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string num(double v) { return trim_fraction(fixed(v, 3)); }

}  // namespace detail

inline std::string render_pie_svg(const AdditivitySummary& summary, const ColorAssignment& colors) {
  constexpr double kWidth = 480, kHeight = 520, kCx = 240, kCy = 300, kRadius = 180;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "  <text x=\"" << kCx << "\" y=\"40\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"18\">Total: " << detail::xml_escape(summary.formatted_total) << "</text>\n"
      << "  <text x=\"" << kCx << "\" y=\"70\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"18\">" << kMeaningfulQuestion << "</text>\n";
  auto at = [&](double deg) {
    const double t = deg * std::numbers::pi / 180.0;
    return detail::num(kCx + kRadius * std::sin(t)) + ' ' + detail::num(kCy - kRadius * std::cos(t));
  };
  const auto slices = pie_slices(summary);
  for (const PieSlice& s : slices) {
    const double sweep = s.end_deg - s.start_deg;
    if (!(sweep > 0.0)) continue;
    const std::string fill = colors.fill(s.id);
    svg << "  <!-- " << detail::xml_escape(s.id) << " -->\n";
    if (sweep >= 360.0 - 1e-9) {
      svg << "  <circle cx=\"" << kCx << "\" cy=\"" << kCy << "\" r=\"" << kRadius << "\" fill=\""
          << fill << "\" stroke=\"#FFFFFF\"/>\n";
      continue;
    }
    svg << "  <path d=\"M " << kCx << ' ' << kCy << " L " << at(s.start_deg) << " A " << kRadius
        << ' ' << kRadius << " 0 " << (sweep > 180.0 ? 1 : 0) << " 1 " << at(s.end_deg)
        << " Z\" fill=\"" << fill << "\" stroke=\"#FFFFFF\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace cartogrammer
