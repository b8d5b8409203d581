#ifndef VLNCE_METRICS_HPP
#define VLNCE_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "vlnce/config.hpp"
#include "vlnce/errors.hpp"
#include "vlnce/geometry.hpp"
#include "vlnce/scenegen.hpp"
#include "vlnce/trajectory.hpp"
#include "vlnce/world.hpp"

namespace vlnce {

/// Dynamic time warping cost with Euclidean point distance. Both endpoints are matched and the
/// alignment is monotone. O(|P||R|) time, O(|R|) memory.
inline double dtw(std::span<const Point2> p, std::span<const Point2> r) {
  if (p.empty() || r.empty()) throw ContractError("dtw needs non-empty polylines");
  std::vector<double> prev(r.size());
  std::vector<double> curr(r.size());
  prev[0] = distance(p[0], r[0]);
  for (std::size_t j = 1; j < r.size(); ++j) prev[j] = distance(p[0], r[j]) + prev[j - 1];
  for (std::size_t i = 1; i < p.size(); ++i) {
    curr[0] = distance(p[i], r[0]) + prev[0];
    for (std::size_t j = 1; j < r.size(); ++j)
      curr[j] = distance(p[i], r[j]) + std::min({prev[j], curr[j - 1], prev[j - 1]});
    std::swap(prev, curr);
  }
  return prev.back();
}

/// exp(-dtw / (|R| * dtw_threshold)), in (0, 1].
inline double ndtw(std::span<const Point2> p, std::span<const Point2> r, const SimConfig& cfg) {
  return std::exp(-dtw(p, r) / (static_cast<double>(r.size()) * cfg.dtw_threshold));
}

struct MetricsReport {
  double path_length = 0.0;       // PL
  double navigation_error = 0.0;  // NE
  double success = 0.0;           // SR, 0 or 1
  double spl = 0.0;
  double ndtw = 0.0;
  double sdtw = 0.0;
};

/// Reference polyline as used for NDTW: resampled at the forward step so that its density
/// matches the executed trajectory.
inline Polyline ndtw_reference(const Episode& episode, const SimConfig& cfg) {
  return resample_polyline(episode.reference_path, cfg.forward_step);
}

inline MetricsReport evaluate_episode(const Episode& episode, const TrajectoryLog& log, const OccupancyGrid& grid,
                                      const SimConfig& cfg) {
  const auto geodesic = geodesic_distance(grid, episode.start.position(), episode.goal);
  if (!geodesic) throw EvaluationError("episode " + episode.id + ": goal unreachable from start");

  const Polyline traj = log.positions();
  MetricsReport m;
  m.path_length = polyline_length(traj);
  m.navigation_error = distance(traj.back(), episode.goal);
  m.success = m.navigation_error <= cfg.success_threshold ? 1.0 : 0.0;
  const double denom = std::max(m.path_length, *geodesic);
  m.spl = denom > 0.0 ? m.success * (*geodesic / denom) : m.success;
  m.ndtw = ndtw(traj, ndtw_reference(episode, cfg), cfg);
  m.sdtw = m.success * m.ndtw;
  return m;
}

/// Arithmetic means over episodes.
inline MetricsReport mean_metrics(std::span<const MetricsReport> reports) {
  MetricsReport out;
  if (reports.empty()) return out;
  for (const auto& r : reports) {
    out.path_length += r.path_length;
    out.navigation_error += r.navigation_error;
    out.success += r.success;
    out.spl += r.spl;
    out.ndtw += r.ndtw;
    out.sdtw += r.sdtw;
  }
  const double n = static_cast<double>(reports.size());
  out.path_length /= n;
  out.navigation_error /= n;
  out.success /= n;
  out.spl /= n;
  out.ndtw /= n;
  out.sdtw /= n;
  return out;
}

}  // namespace vlnce

#endif  // VLNCE_METRICS_HPP
