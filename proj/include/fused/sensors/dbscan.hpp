#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "fused/core/errors.hpp"
#include "fused/sensors/radar.hpp"

namespace fused {

struct RadarTrack {
  double rel_x = 0.0;
  double rel_y = 0.0;
  double rel_v = 0.0;

  Lead to_lead() const { return {rel_x, rel_y, rel_v, std::nullopt}; }
  friend bool operator==(const RadarTrack &, const RadarTrack &) = default;
};

inline constexpr std::size_t kMaxRadarTracks = 16;
inline constexpr int kNoise = -1;

/// DBSCAN labels over (rel_x, rel_y) with the Euclidean metric. A point is a
/// core point when at least min_samples points (itself included) lie within
/// eps. Clusters are numbered in order of their first core point.
inline std::vector<int> dbscan_labels(std::span<const RadarReturn> pts, double eps,
                                      int min_samples) {
  if (!(eps > 0.0)) throw ConfigError("dbscan eps must be > 0");
  if (min_samples < 1) throw ConfigError("dbscan min_samples must be >= 1");
  const std::size_t n = pts.size();
  const double eps2 = eps * eps;
  std::vector<std::vector<std::size_t>> neighbors(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = pts[i].rel_x - pts[j].rel_x;
      const double dy = pts[i].rel_y - pts[j].rel_y;
      if (dx * dx + dy * dy <= eps2) neighbors[i].push_back(j);
    }
  }
  auto is_core = [&](std::size_t i) {
    return neighbors[i].size() >= static_cast<std::size_t>(min_samples);
  };

  constexpr int kUnvisited = -2;
  std::vector<int> label(n, kUnvisited);
  int cluster = 0;
  std::vector<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] != kUnvisited) continue;
    if (!is_core(i)) {
      label[i] = kNoise;
      continue;
    }
    label[i] = cluster;
    frontier.assign(neighbors[i].begin(), neighbors[i].end());
    while (!frontier.empty()) {
      const std::size_t j = frontier.back();
      frontier.pop_back();
      if (label[j] == kNoise) label[j] = cluster;  // border point
      if (label[j] != kUnvisited) continue;
      label[j] = cluster;
      if (is_core(j))
        frontier.insert(frontier.end(), neighbors[j].begin(), neighbors[j].end());
    }
    ++cluster;
  }
  return label;
}

/// Clusters reduced to centroid position and mean relative speed, nearest
/// first, at most kMaxRadarTracks of them.
inline std::vector<RadarTrack> dbscan_cluster(std::span<const RadarReturn> pts, double eps,
                                              int min_samples) {
  const std::vector<int> label = dbscan_labels(pts, eps, min_samples);
  const int clusters = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<RadarTrack> tracks(static_cast<std::size_t>(std::max(clusters, 0)));
  std::vector<std::size_t> counts(tracks.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (label[i] < 0) continue;
    auto &t = tracks[static_cast<std::size_t>(label[i])];
    t.rel_x += pts[i].rel_x;
    t.rel_y += pts[i].rel_y;
    t.rel_v += pts[i].rel_v;
    ++counts[static_cast<std::size_t>(label[i])];
  }
  for (std::size_t c = 0; c < tracks.size(); ++c) {
    const double k = static_cast<double>(counts[c]);
    tracks[c].rel_x /= k;
    tracks[c].rel_y /= k;
    tracks[c].rel_v /= k;
  }
  std::stable_sort(tracks.begin(), tracks.end(),
                   [](const RadarTrack &a, const RadarTrack &b) { return a.rel_x < b.rel_x; });
  if (tracks.size() > kMaxRadarTracks) tracks.resize(kMaxRadarTracks);
  return tracks;
}

}  // namespace fused
