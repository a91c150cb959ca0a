#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "fused/core/errors.hpp"
#include "fused/fusion/types.hpp"
#include "fused/objectives/dist.hpp"
#include "fused/sim/simulation.hpp"

namespace fused {

struct FaultConfig {
  int th = 0;              // Eq.-3 dimension-count threshold
  int th_err = 0;          // fusion-fault tolerance
  double pre_crash_m = 2.5;  // seconds

  void validate() const {
    if (th < 0) throw ConfigError("fault.th must be >= 0");
    if (th_err < 0) throw ConfigError("fault.th_err must be >= 0");
    if (!(pre_crash_m > 0)) throw ConfigError("fault.pre_crash_m must be > 0");
  }
  friend bool operator==(const FaultConfig &, const FaultConfig &) = default;
};

struct ObjectiveWeights {
  double c_failure = -1.0;
  double c_d = 1.0;
  double c_fusion = -2.0;

  friend bool operator==(const ObjectiveWeights &, const ObjectiveWeights &) = default;
};

struct ObjectiveValues {
  double f_failure = 0.0;
  double f_d = 1.0;
  double f_fusion = 0.0;
  double fitness = 0.0;

  friend bool operator==(const ObjectiveValues &, const ObjectiveValues &) = default;
};

inline constexpr double kDefaultDistanceCap = 100.0;
inline constexpr double kDefaultStoppingBrake = 6.0;

/// Smallest dist() any single sensor lead achieves; kMaxDist when no sensor
/// reported anything.
inline int best_sensor_dist(std::span<const Lead> camera, std::span<const Lead> radar,
                            const MaybeLead &gt, const DistThresholds &th) {
  int best = kMaxDist;
  for (const auto &l : camera) best = std::min(best, dist(l, gt, th));
  for (const auto &l : radar) best = std::min(best, dist(l, gt, th));
  return best;
}

inline bool is_fusion_fault(const FusionInput &in, const MaybeLead &fusion_out,
                            const MaybeLead &gt, const FaultConfig &cfg = {},
                            const DistThresholds &th = {}) {
  return best_sensor_dist(in.camera_leads, in.radar_tracks, gt, th) + cfg.th_err <
         dist(fusion_out, gt, th);
}

/// Frame indices [first, last) making up the pre-crash window: the m seconds
/// before the collision, or the final m seconds of a collision-free run.
struct FrameWindow {
  std::size_t first = 0;
  std::size_t last = 0;
};

inline FrameWindow pre_crash_frames(const SimulationTrace &t, double m) {
  const double end = t.collision ? t.collision->time : t.config.horizon;
  const double start = end - m;
  FrameWindow w{t.frames.size(), t.frames.size()};
  for (std::size_t i = 0; i < t.frames.size(); ++i) {
    if (t.frames[i].time >= start - 1e-9) {
      w.first = i;
      break;
    }
  }
  return w;
}

/// Share of pre-crash frames where some sensor was within th of ground
/// truth while the fusion output was not.
inline double f_fusion(const SimulationTrace &t, const FaultConfig &cfg = {},
                       const DistThresholds &th = {}) {
  if (t.frames.empty()) throw SimulationError("f_fusion requires a nonempty trace");
  const FrameWindow w = pre_crash_frames(t, cfg.pre_crash_m);
  if (w.first >= w.last) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = w.first; i < w.last; ++i) {
    const auto &f = t.frames[i];
    const bool sensor_ok =
        best_sensor_dist(f.camera_leads, f.radar_leads, f.ground_truth, th) <= cfg.th;
    if (sensor_ok && dist(f.fusion_out, f.ground_truth, th) > cfg.th) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(w.last - w.first);
}

/// Minimum over frames of gap minus stopping distance, normalized by cap.
inline double f_d(const SimulationTrace &t, double brake = kDefaultStoppingBrake,
                  double cap = kDefaultDistanceCap) {
  if (!(brake > 0)) throw ConfigError("f_d brake must be > 0");
  if (!(cap > 0)) throw ConfigError("f_d distance cap must be > 0");
  double lo = cap;
  for (const auto &f : t.frames) {
    if (!f.ground_truth) continue;
    lo = std::min(lo, f.ground_truth->rel_x - f.ego_speed * f.ego_speed / (2.0 * brake));
  }
  if (t.collision) lo = 0.0;
  return std::clamp(lo, 0.0, cap) / cap;
}

inline double fitness(const ObjectiveValues &v, const ObjectiveWeights &w = {}) {
  return w.c_failure * v.f_failure + w.c_d * v.f_d + w.c_fusion * v.f_fusion;
}

inline ObjectiveValues evaluate_objectives(const SimulationTrace &t, const FaultConfig &cfg,
                                           const DistThresholds &th, const ObjectiveWeights &w,
                                           double distance_cap = kDefaultDistanceCap) {
  ObjectiveValues v;
  v.f_failure = t.collided() ? 1.0 : 0.0;
  v.f_d = f_d(t, kDefaultStoppingBrake, distance_cap);
  v.f_fusion = f_fusion(t, cfg, th);
  v.fitness = fitness(v, w);
  return v;
}

}  // namespace fused
