#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cartogrammer/cartogram_engine.hpp"
#include "cartogrammer/color.hpp"
#include "cartogrammer/data_pipeline.hpp"
#include "cartogrammer/geojson.hpp"
#include "cartogrammer/presentation.hpp"
#include "cartogrammer/topology.hpp"

namespace cartogrammer::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kNonConvergence = 2,
  kTopologyFailure = 3,
  kUnconfirmed = 4,
};

enum class Projection { none, cea };

struct RunConfig {
  std::string map_path;
  std::string csv_path;
  std::string out_dir = "out";
  std::string id_property = "id";
  std::string name_property = "name";
  std::string abbr_property = "abbr";
  Canvas canvas;
  SolverParams solver;
  bool assume_additive = false;
  Projection project = Projection::none;
  std::map<std::string, std::string> color_overrides;

  void validate() const {
    if (map_path.empty()) throw DomainError("--map is required");
    if (csv_path.empty()) throw DomainError("--csv is required");
    if (out_dir.empty()) throw DomainError("--out must not be empty");
    if (canvas.width <= 0 || canvas.height <= 0) throw DomainError("canvas must be positive");
    solver.validate();
  }
};

// Where a command reads confirmations from and writes its report to.
struct Console {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool interactive = false;  // stdin is a terminal
  bool color = false;        // ANSI styling in reports
};

inline bool color_allowed(bool stdout_is_tty) {
  return stdout_is_tty && std::getenv("CARTOGRAMMER_NO_COLOR") == nullptr;
}

// "WxH" -> Canvas
inline Canvas parse_canvas(const std::string& text) {
  const auto x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used_w = 0, used_h = 0;
    const std::string w = text.substr(0, x), h = text.substr(x + 1);
    Canvas c{std::stoi(w, &used_w), std::stoi(h, &used_h)};
    if (used_w != w.size() || used_h != h.size() || c.width <= 0 || c.height <= 0) {
      throw std::invalid_argument(text);
    }
    return c;
  } catch (const std::logic_error&) {
    throw DomainError("canvas must look like 800x600, got \"" + text + "\"");
  }
}

// Dataset names become file stems; anything outside [A-Za-z0-9._-] maps to '_'.
inline std::string file_stem(const std::string& dataset) {
  std::string out;
  for (unsigned char c : dataset) {
    out += (std::isalnum(c) || c == '.' || c == '_' || c == '-') ? static_cast<char>(c) : '_';
  }
  return out.empty() ? "dataset" : out;
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

struct Style {
  bool on;
  std::string bold(const std::string& s) const { return on ? "\x1b[1m" + s + "\x1b[0m" : s; }
  std::string warn(const std::string& s) const { return on ? "\x1b[33m" + s + "\x1b[0m" : s; }
  std::string bad(const std::string& s) const { return on ? "\x1b[31m" + s + "\x1b[0m" : s; }
  std::string good(const std::string& s) const { return on ? "\x1b[32m" + s + "\x1b[0m" : s; }
};

// Everything the three commands share: the map, its bound datasets and the
// color assignment.
struct Workspace {
  MapDocument map;
  std::vector<BoundDataset> datasets;
  AdjacencyGraph adjacency;
  ColorAssignment colors;
  GeoJsonOptions geo_options;
};

inline Workspace load(const RunConfig& config) {
  config.validate();
  GeoJsonOptions geo;
  geo.id_property = config.id_property;
  geo.name_property = config.name_property;
  geo.abbr_property = config.abbr_property;
  std::string map_text = read_file(config.map_path);
  const std::string csv_text = read_file(config.csv_path);
  if (config.project == Projection::cea) {
    map_text = project_cea(map_text);
    geo.units_note = "cylindrical equal-area, km";
  }
  MapDocument map = parse_geojson(map_text, geo);
  std::vector<BoundDataset> bound;
  for (const Dataset& ds : parse_csv(csv_text)) bound.push_back(bind(map, ds));
  AdjacencyGraph adjacency = build_adjacency(map);
  ColorAssignment colors = assign_colors(adjacency, config.color_overrides);
  return {std::move(map), std::move(bound), std::move(adjacency), std::move(colors), geo};
}

inline void print_summary(const BoundDataset& ds, const AdditivitySummary& summary,
                          const Style& style, std::ostream& out) {
  out << style.bold("Dataset \"" + ds.name + "\"") << (ds.unit.empty() ? "" : " (" + ds.unit + ")")
      << "\n";
  for (const std::string& w : ds.warnings) out << "  " << style.warn("warning: " + w) << "\n";
  out << "  total: " << summary.formatted_total << "\n";
  out << "  " << summary.confirmation_prompt << "\n";
}

// Asks for every dataset; returns the indices the user accepted. Reading
// stops at end of input, which counts as "no".
inline std::vector<std::size_t> confirm_datasets(const Workspace& ws, const RunConfig& config,
                                                 Console& console, const Style& style,
                                                 bool& refused) {
  std::vector<std::size_t> accepted;
  refused = false;
  if (config.assume_additive) {
    for (std::size_t i = 0; i < ws.datasets.size(); ++i) accepted.push_back(i);
    return accepted;
  }
  if (!console.interactive) {
    console.err << style.bad("error: ") << "each dataset total must be confirmed before a cartogram "
                << "is computed; run in a terminal to answer the prompt or pass --assume-additive\n";
    refused = true;
    return accepted;
  }
  for (std::size_t i = 0; i < ws.datasets.size(); ++i) {
    const BoundDataset& ds = ws.datasets[i];
    print_summary(ds, additivity_summary(ds), style, console.out);
    console.out << "  Compute a cartogram for \"" << ds.name << "\"? [y/N] " << std::flush;
    std::string answer;
    if (!std::getline(console.in, answer)) answer.clear();
    for (char& c : answer) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    answer = cartogrammer::detail::trim(answer);
    if (answer == "y" || answer == "yes") {
      accepted.push_back(i);
    } else {
      console.out << "  skipped \"" << ds.name << "\"\n";
      refused = true;
    }
  }
  return accepted;
}

inline std::string diagnostics_json(const CartogramResult& res, const TargetAreas& targets) {
  nlohmann::ordered_json doc;
  doc["status"] = to_string(res.status);
  doc["iterations"] = res.iterations;
  doc["initialMaxRelError"] = res.initial_max_rel_error;
  doc["finalMaxRelError"] = res.final_max_rel_error;
  doc["finalSizeError"] = res.final_size_error;
  if (!res.failure_detail.empty()) doc["failure"] = res.failure_detail;
  nlohmann::ordered_json regions = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < res.ids.size(); ++i) {
    regions.push_back({{"id", res.ids[i]},
                       {"target", targets.areas[i]},
                       {"achieved", res.achieved_areas[i]}});
  }
  doc["regions"] = std::move(regions);
  nlohmann::ordered_json iters = nlohmann::ordered_json::array();
  for (const IterationRecord& rec : res.per_iteration) {
    iters.push_back({{"maxRelError", rec.max_rel_error},
                     {"sizeError", rec.size_error},
                     {"damping", rec.damping},
                     {"retries", rec.retries}});
  }
  doc["perIteration"] = std::move(iters);
  return doc.dump(2) + "\n";
}

struct Solved {
  std::size_t dataset;
  CartogramResult result;
  TargetAreas targets;
};

// Runs the solver for each accepted dataset and reports per-dataset status.
inline std::vector<Solved> solve_all(const Workspace& ws, const std::vector<std::size_t>& accepted,
                                     const RunConfig& config, const fs::path& out_dir,
                                     Console& console, const Style& style) {
  std::vector<Solved> solved;
  for (std::size_t i : accepted) {
    const BoundDataset& ds = ws.datasets[i];
    const TargetAreas targets = compute_target_areas(ws.map, ds);
    SnapshotSink sink;
    if (config.solver.snapshot_every) {
      sink = [&](int iteration, const MapDocument& m) {
        write_file(out_dir / (file_stem(ds.name) + ".iter" + std::to_string(iteration) + ".geojson"),
                   export_geojson(m));
      };
    }
    CartogramResult res = run_dcn(ws.map, targets, config.solver, sink);
    const std::string status = res.ok() ? style.good("converged") : style.bad(to_string(res.status));
    console.out << "\"" << ds.name << "\": " << status << " after " << res.iterations
                << " iterations, max area error " << format_value(100.0 * res.final_max_rel_error)
                << "%\n";
    if (!res.ok()) console.err << "  " << res.failure_detail << "\n";
    solved.push_back({i, std::move(res), targets});
  }
  return solved;
}

inline int exit_code_for(const std::vector<Solved>& solved, bool refused) {
  for (const Solved& s : solved) {
    if (s.result.status == SolveStatus::topology_failure) return kTopologyFailure;
  }
  for (const Solved& s : solved) {
    if (s.result.status == SolveStatus::non_convergence) return kNonConvergence;
  }
  return refused ? kUnconfirmed : kOk;
}

template <typename Fn>
int guarded(Console& console, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    console.err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace detail

// Parses and binds everything, prints each dataset's total with the
// confirmation question, and writes one pie chart per dataset.
inline int cmd_validate(const RunConfig& config, Console& console) {
  return detail::guarded(console, [&] {
    const detail::Style style{console.color};
    const detail::Workspace ws = detail::load(config);
    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    for (const BoundDataset& ds : ws.datasets) {
      const AdditivitySummary summary = additivity_summary(ds);
      detail::print_summary(ds, summary, style, console.out);
      const fs::path pie = out_dir / (file_stem(ds.name) + ".pie.svg");
      detail::write_file(pie, render_pie_svg(summary, ws.colors));
      console.out << "  pie chart: " << pie.string() << "\n";
    }
    return static_cast<int>(kOk);
  });
}

// Confirms totals, solves every accepted dataset and writes the conventional
// map plus one cartogram (GeoJSON + SVG with legend) and diagnostics file
// per dataset. Nothing is written unless at least one total was confirmed.
inline int cmd_generate(const RunConfig& config, Console& console) {
  return detail::guarded(console, [&] {
    const detail::Style style{console.color};
    const detail::Workspace ws = detail::load(config);
    bool refused = false;
    const auto accepted = detail::confirm_datasets(ws, config, console, style, refused);
    if (accepted.empty()) return static_cast<int>(kUnconfirmed);

    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);
    detail::write_file(out_dir / "conventional.svg",
                       export_svg(ws.map, ws.colors, std::nullopt, {}, config.canvas));
    const auto solved = detail::solve_all(ws, accepted, config, out_dir, console, style);
    for (const detail::Solved& s : solved) {
      const BoundDataset& ds = ws.datasets[s.dataset];
      const std::string stem = file_stem(ds.name);
      detail::write_file(out_dir / (stem + ".diagnostics.json"),
                         detail::diagnostics_json(s.result, s.targets));
      if (!s.result.ok()) continue;
      GeoJsonExportOptions geo;
      geo.id_property = config.id_property;
      geo.name_property = config.name_property;
      geo.abbr_property = config.abbr_property;
      geo.dataset = &ds;
      detail::write_file(out_dir / (stem + ".cartogram.geojson"),
                         export_geojson(s.result.cartogram, geo));
      const LegendSpec legend = legend_for(s.result.cartogram, ds, config.canvas);
      detail::write_file(out_dir / (stem + ".cartogram.svg"),
                         export_svg(s.result.cartogram, ws.colors, legend, missing_ids(ds),
                                    config.canvas));
      console.out << "  legend: " << legend.label << "\n";
    }
    return detail::exit_code_for(solved, refused);
  });
}

// Builds bundle.json for the browser viewer. Cartograms already written by
// generate are reused; the rest are computed (behind the same confirmation
// gate). Every pool must match the conventional map's structure.
inline int cmd_bundle(const RunConfig& config, Console& console) {
  return detail::guarded(console, [&] {
    const detail::Style style{console.color};
    const detail::Workspace ws = detail::load(config);
    const fs::path out_dir(config.out_dir);

    std::vector<std::optional<MapDocument>> existing(ws.datasets.size());
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < ws.datasets.size(); ++i) {
      const fs::path path = out_dir / (file_stem(ws.datasets[i].name) + ".cartogram.geojson");
      if (fs::exists(path)) {
        MapDocument m = parse_geojson(detail::read_file(path), ws.geo_options);
        if (!ws.map.same_structure(m)) {
          throw StructureMismatch(path.string() +
                                  " does not match the map's vertex pool; refusing to write bundle");
        }
        existing[i] = std::move(m);
      } else {
        pending.push_back(i);
      }
    }

    bool refused = false;
    std::vector<std::size_t> accepted;
    if (!pending.empty()) {
      detail::Workspace subset{ws.map, {}, ws.adjacency, ws.colors, ws.geo_options};
      for (std::size_t i : pending) subset.datasets.push_back(ws.datasets[i]);
      for (std::size_t k : detail::confirm_datasets(subset, config, console, style, refused)) {
        accepted.push_back(pending[k]);
      }
    }
    fs::create_directories(out_dir);
    const auto solved = detail::solve_all(ws, accepted, config, out_dir, console, style);
    for (const detail::Solved& s : solved) {
      if (s.result.ok()) existing[s.dataset] = s.result.cartogram;
    }

    std::vector<BundleView> views;
    for (std::size_t i = 0; i < ws.datasets.size(); ++i) {
      if (existing[i]) views.push_back({ws.datasets[i], *existing[i]});
    }
    if (views.empty()) {
      console.err << "error: no dataset available for the bundle\n";
      const int code = detail::exit_code_for(solved, refused);
      return code == kOk ? static_cast<int>(kUnconfirmed) : code;
    }
    if (views.size() < ws.datasets.size()) {
      std::string skipped;
      for (std::size_t i = 0; i < ws.datasets.size(); ++i) {
        if (!existing[i]) skipped += (skipped.empty() ? "\"" : ", \"") + ws.datasets[i].name + "\"";
      }
      console.err << style.warn("warning: ") << "bundle leaves out " << skipped << "\n";
    }
    const fs::path path = out_dir / "bundle.json";
    detail::write_file(path, build_viewer_bundle(ws.map, views, ws.colors, config.canvas));
    console.out << "bundle: " << path.string() << " (" << views.size() << " dataset"
                << (views.size() == 1 ? "" : "s") << ")\n";
    return detail::exit_code_for(solved, refused);
  });
}

}  // namespace cartogrammer::cli
