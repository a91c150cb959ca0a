#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "fused/fusion/kalman.hpp"
#include "fused/fusion/types.hpp"

namespace fused {

struct TrackerParams {
  double dt = 0.05;                   // s, one control tick
  double stationary_speed = 0.5;      // m/s, absolute
  double association_gate = 3.0;      // m, Euclidean in (x, y)
  int max_missed = 5;                 // ticks
  double min_camera_confidence = 5.0; // percent
  ProcessNoise process;
  Eigen::Vector3d camera_variance{0.64, 0.04, 0.36};
  Eigen::Vector3d radar_variance{0.09, 0.16, 0.0625};
  /// Minimum per-tick decrease of |y| that counts as approaching.
  double lateral_approach_eps = 0.0;

  friend bool operator==(const TrackerParams &a, const TrackerParams &b) {
    return a.dt == b.dt && a.stationary_speed == b.stationary_speed &&
           a.association_gate == b.association_gate && a.max_missed == b.max_missed &&
           a.min_camera_confidence == b.min_camera_confidence && a.process == b.process &&
           a.camera_variance == b.camera_variance && a.radar_variance == b.radar_variance &&
           a.lateral_approach_eps == b.lateral_approach_eps;
  }
};

struct TrackerState {
  std::vector<KalmanTrack> tracks;
  int next_id = 0;
};

namespace detail {

inline Eigen::Matrix3d variance_matrix(const Eigen::Vector3d &v) {
  return v.cwiseMax(1e-6).asDiagonal();
}

/// Greedy global-nearest-neighbor: repeatedly take the closest remaining
/// (detection, track) pair inside the gate. Returns the detections that
/// found no track.
inline std::vector<const Lead *> associate(std::vector<KalmanTrack> &tracks,
                                           std::vector<bool> &updated,
                                           const std::vector<const Lead *> &dets,
                                           const Eigen::Matrix3d &r, double gate) {
  struct Pair {
    double d;
    std::size_t det;
    std::size_t track;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    for (std::size_t j = 0; j < tracks.size(); ++j) {
      const double d = std::hypot(dets[i]->rel_x - tracks[j].x(), dets[i]->rel_y - tracks[j].y());
      if (d <= gate) pairs.push_back({d, i, j});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair &a, const Pair &b) { return a.d < b.d; });
  std::vector<bool> det_used(dets.size(), false), track_used(tracks.size(), false);
  for (const auto &p : pairs) {
    if (det_used[p.det] || track_used[p.track]) continue;
    det_used[p.det] = track_used[p.track] = true;
    tracks[p.track] = kf_update(tracks[p.track], *dets[p.det], r);
    updated[p.track] = true;
  }
  std::vector<const Lead *> unmatched;
  for (std::size_t i = 0; i < dets.size(); ++i)
    if (!det_used[i]) unmatched.push_back(dets[i]);
  return unmatched;
}

inline FusionOutput tracker_step(TrackerState &st, const FusionInput &in,
                                 const TrackerParams &p, bool admit_approaching) {
  // (1) clutter: stationary radar tracks outside the ego lane
  std::vector<const Lead *> radar;
  for (const auto &r : in.radar_tracks) {
    const bool stationary = std::abs(r.rel_v + in.ego_speed) < p.stationary_speed;
    const bool outside = std::abs(r.rel_y) > in.lane_half_width;
    if (!(stationary && outside)) radar.push_back(&r);
  }
  std::vector<const Lead *> camera;
  for (const auto &c : in.camera_leads)
    if (c.confidence.value_or(0.0) >= p.min_camera_confidence) camera.push_back(&c);

  // (2) predict, associate, update, spawn, age out
  for (auto &t : st.tracks) t = kf_predict(t, p.dt, p.process);
  std::vector<bool> updated(st.tracks.size(), false);
  const Eigen::Matrix3d r_cam = variance_matrix(p.camera_variance);
  const Eigen::Matrix3d r_rad = variance_matrix(p.radar_variance);
  for (const Lead *d : associate(st.tracks, updated, camera, r_cam, p.association_gate)) {
    st.tracks.push_back(spawn_track(*d, r_cam, st.next_id++));
    updated.push_back(true);
  }
  for (const Lead *d : associate(st.tracks, updated, radar, r_rad, p.association_gate)) {
    st.tracks.push_back(spawn_track(*d, r_rad, st.next_id++));
    updated.push_back(true);
  }
  for (std::size_t i = 0; i < st.tracks.size(); ++i) {
    auto &t = st.tracks[i];
    if (updated[i]) {
      t.missed = 0;
      ++t.age;
    } else {
      ++t.missed;
    }
  }
  std::erase_if(st.tracks, [&](const KalmanTrack &t) { return t.missed > p.max_missed; });

  // (3) rank matched in-lane tracks by range
  std::vector<const KalmanTrack *> pool;
  for (const auto &t : st.tracks) {
    if (t.missed != 0) continue;
    const double ay = std::abs(t.y());
    const bool in_lane = ay < in.lane_half_width;
    const bool approaching =
        admit_approaching && t.has_previous && ay < t.previous_abs_y - p.lateral_approach_eps;
    if (in_lane || approaching) pool.push_back(&t);
  }
  std::stable_sort(pool.begin(), pool.end(), [](const KalmanTrack *a, const KalmanTrack *b) {
    return a->x() < b->x();
  });

  FusionOutput out;
  out.method = admit_approaching ? FusionMethod::mathworks_plus : FusionMethod::mathworks;
  out.decision = FusionDecision::tracker;
  if (!pool.empty()) out.primary = pool[0]->to_lead();
  if (pool.size() > 1) out.secondary = pool[1]->to_lead();

  for (auto &t : st.tracks) {
    t.previous_abs_y = std::abs(t.y());
    t.has_previous = true;
  }
  return out;
}

}  // namespace detail

/// Kalman-tracker fusion: clutter filter, track association and update,
/// then the nearest matched track inside the ego lane.
inline FusionOutput mathworks_fusion(TrackerState &state, const FusionInput &in,
                                     const TrackerParams &p = {}) {
  return detail::tracker_step(state, in, p, false);
}

/// As mathworks_fusion, but a track whose |y| shrank since the previous tick
/// joins the candidate pool even while still outside the ego lane.
inline FusionOutput mathworks_plus(TrackerState &state, const FusionInput &in,
                                   const TrackerParams &p = {}) {
  return detail::tracker_step(state, in, p, true);
}

}  // namespace fused
