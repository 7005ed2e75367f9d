#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cartogrammer/data_pipeline.hpp"
#include "cartogrammer/errors.hpp"
#include "cartogrammer/map_document.hpp"
#include "cartogrammer/topology.hpp"

namespace cartogrammer {

struct SolverParams {
  int max_iterations = 512;
  double area_tolerance = 0.01;  // relative, per region
  int max_retries_per_iteration = 8;
  std::optional<int> snapshot_every;

  void validate() const {
    if (max_iterations < 1) throw DomainError("max iterations must be >= 1");
    if (!(area_tolerance > 0.0 && area_tolerance < 1.0)) {
      throw DomainError("area tolerance must lie in (0, 1)");
    }
    if (max_retries_per_iteration < 0) throw DomainError("retries must be >= 0");
    if (snapshot_every && *snapshot_every < 1) throw DomainError("snapshot interval must be >= 1");
  }
};

// Mean over regions of max(A, D) / min(A, D); 1 exactly when every area
// matches its target.
inline double size_error(std::span<const double> areas, std::span<const double> targets) {
  if (areas.size() != targets.size() || areas.empty()) {
    throw DomainError("size_error needs one target per area");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < areas.size(); ++i) {
    if (!(areas[i] > 0.0) || !(targets[i] > 0.0)) {
      throw DomainError("size_error needs positive areas and targets");
    }
    sum += std::max(areas[i], targets[i]) / std::min(areas[i], targets[i]);
  }
  return sum / static_cast<double>(areas.size());
}

inline double size_error(const std::map<std::string, double>& areas, const TargetAreas& targets) {
  std::vector<double> a;
  for (const std::string& id : targets.ids) {
    const auto it = areas.find(id);
    if (it == areas.end()) throw DomainError("no area for region \"" + id + "\"");
    a.push_back(it->second);
  }
  return size_error(a, targets.areas);
}

inline double max_relative_error(std::span<const double> areas, std::span<const double> targets) {
  double worst = 0.0;
  for (std::size_t i = 0; i < areas.size(); ++i) {
    worst = std::max(worst, std::abs(areas[i] - targets[i]) / targets[i]);
  }
  return worst;
}

struct DcnStep {
  MapDocument map;
  double size_error = 1.0;
  double force_reduction = 1.0;  // 1 / (1 + size error), before damping
  double max_displacement = 0.0;
};

// One Dougenik-Chrisman-Niemeyer pass. Every pool vertex is pushed by every
// region's radial force, all computed from the state on entry, and the
// displacement is scaled by the force reduction factor times `damping`.
// Shared border vertices exist once in the pool, so they move once.
inline DcnStep dcn_iterate(const MapDocument& map, const TargetAreas& targets, double damping = 1.0) {
  const std::size_t n = map.region_count();
  if (targets.areas.size() != n) throw DomainError("targets do not match the map");

  const std::vector<double> areas = region_areas(map);
  std::vector<double> radius(n), mass(n);
  std::vector<Point> centroid(n);
  for (std::size_t j = 0; j < n; ++j) {
    radius[j] = std::sqrt(areas[j] / std::numbers::pi);
    mass[j] = std::sqrt(targets.areas[j] / std::numbers::pi) - radius[j];
    centroid[j] = centroid_by_index(map, j);
  }
  const double err = size_error(areas, targets.areas);
  const double reduction = 1.0 / (1.0 + err);
  const double scale = reduction * damping;

  const auto pool = map.vertices();
  std::vector<Point> moved(pool.begin(), pool.end());
  double max_shift = 0.0;
  for (std::size_t v = 0; v < pool.size(); ++v) {
    const Point p = pool[v];
    Point shift;
    for (std::size_t j = 0; j < n; ++j) {
      if (mass[j] == 0.0) continue;
      const Point offset = p - centroid[j];
      const double d = norm(offset);
      if (d == 0.0) continue;
      const double force = d > radius[j]
                               ? mass[j] * radius[j] / d
                               : mass[j] * (d / radius[j]) * (d / radius[j]) * (4.0 - 3.0 * d / radius[j]);
      shift = shift + (force / d) * offset;
    }
    moved[v] = p + scale * shift;
    max_shift = std::max(max_shift, scale * norm(shift));
  }
  return {map.with_vertices(std::move(moved)), err, reduction, max_shift};
}

enum class SolveStatus { converged, non_convergence, topology_failure };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::non_convergence: return "non_convergence";
    case SolveStatus::topology_failure: return "topology_failure";
  }
  return "unknown";
}

struct IterationRecord {
  double max_rel_error = 0.0;
  double size_error = 0.0;
  double damping = 1.0;  // product of the halvings that were needed
  int retries = 0;
};

struct CartogramResult {
  MapDocument cartogram;
  SolveStatus status = SolveStatus::converged;
  int iterations = 0;
  double initial_max_rel_error = 0.0;
  double final_max_rel_error = 0.0;
  double final_size_error = 1.0;
  std::vector<std::string> ids;
  std::vector<double> achieved_areas;  // region order
  std::vector<IterationRecord> per_iteration;
  std::string failure_detail;
  std::optional<RingRef> offending_ring;

  bool ok() const { return status == SolveStatus::converged; }

  double achieved_area(const std::string& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] == id) return achieved_areas[i];
    }
    throw DomainError("unknown region id \"" + id + "\"");
  }
};

using SnapshotSink = std::function<void(int iteration, const MapDocument&)>;

namespace detail {

// Targets rescaled to the map's current total area, so total-area drift of
// the force method cannot compound from one pass to the next.
inline TargetAreas renormalized(const TargetAreas& targets, double current_total) {
  TargetAreas out = targets;
  const double factor = current_total / targets.total_area;
  for (double& a : out.areas) a *= factor;
  out.total_area = current_total;
  return out;
}

inline MapDocument scale_about_center(const MapDocument& map, double factor) {
  const Point c = map.bbox().center();
  std::vector<Point> pool(map.vertices().begin(), map.vertices().end());
  for (Point& p : pool) p = c + factor * (p - c);
  return map.with_vertices(std::move(pool));
}

}  // namespace detail

// Repeats dcn_iterate until every region is within area_tolerance of its
// target share. A pass that breaks planarity is rolled back and retried
// with half the step. The returned map is rescaled about its bounding-box
// center so that its total area equals the input total.
inline CartogramResult run_dcn(const MapDocument& map, const TargetAreas& targets,
                               const SolverParams& params = {}, const SnapshotSink& snapshot = {}) {
  params.validate();
  if (targets.areas.size() != map.region_count()) throw DomainError("targets do not match the map");
  for (double t : targets.areas) {
    if (!(t > 0.0)) throw DomainError("targets must be positive");
  }

  CartogramResult result{map};
  result.ids = targets.ids;

  auto relative_error = [&](const MapDocument& m) {
    const std::vector<double> a = region_areas(m);
    double total = 0.0;
    for (double x : a) total += x;
    const TargetAreas t = detail::renormalized(targets, total);
    return std::pair{max_relative_error(a, t.areas), size_error(a, t.areas)};
  };

  MapDocument current = map;
  auto [err, serr] = relative_error(current);
  result.initial_max_rel_error = err;
  MapDocument best = current;
  double best_err = err, best_serr = serr;

  while (err >= params.area_tolerance && result.iterations < params.max_iterations) {
    const TargetAreas step_targets = detail::renormalized(targets, total_area(current));
    double damping = 1.0;
    int retries = 0;
    std::optional<MapDocument> accepted;
    TopologyReport report;
    for (;;) {
      DcnStep step = dcn_iterate(current, step_targets, damping);
      report = verify_topology(current, step.map);
      if (report.passed()) {
        accepted = std::move(step.map);
        break;
      }
      if (retries == params.max_retries_per_iteration) break;
      ++retries;
      damping *= 0.5;
    }
    if (!accepted) {
      result.status = SolveStatus::topology_failure;
      result.failure_detail = "iteration " + std::to_string(result.iterations + 1) + ": " + report.detail;
      result.offending_ring = report.offending_ring;
      break;
    }
    current = std::move(*accepted);
    ++result.iterations;
    std::tie(err, serr) = relative_error(current);
    result.per_iteration.push_back({err, serr, damping, retries});
    if (err < best_err) {
      best = current;
      best_err = err;
      best_serr = serr;
    }
    if (snapshot && params.snapshot_every && result.iterations % *params.snapshot_every == 0) {
      snapshot(result.iterations, current);
    }
  }

  if (result.status == SolveStatus::converged && err >= params.area_tolerance) {
    result.status = SolveStatus::non_convergence;
    result.failure_detail = "max relative area error " + std::to_string(best_err) + " after " +
                            std::to_string(result.iterations) + " iterations";
  }
  MapDocument out = result.status == SolveStatus::converged ? current : best;
  if (result.iterations > 0) {
    out = detail::scale_about_center(out, std::sqrt(targets.total_area / total_area(out)));
  }
  result.cartogram = std::move(out);
  result.final_max_rel_error = result.status == SolveStatus::converged ? err : best_err;
  result.final_size_error = result.status == SolveStatus::converged ? serr : best_serr;
  result.achieved_areas = region_areas(result.cartogram);
  return result;
}

}  // namespace cartogrammer
