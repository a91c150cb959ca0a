#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "fused/fusion/types.hpp"

namespace fused {

struct DefaultFusionParams {
  double low_speed = 4.0;        // m/s
  double close_distance = 25.0;  // m
  double min_confidence = 50.0;  // percent; the best camera lead must exceed it
  double match_base = 2.5;       // m
  double match_gain = 0.05;      // per meter of range
  double match_speed = 3.0;      // m/s

  friend bool operator==(const DefaultFusionParams &, const DefaultFusionParams &) = default;
};

/// The rule-based gate flow: low-speed radar, camera-confidence gate, then
/// radar/camera matching against the most confident camera lead.
inline FusionOutput default_fusion(const FusionInput &in, const DefaultFusionParams &p = {}) {
  FusionOutput out;
  out.method = FusionMethod::default_rule;

  if (in.ego_speed < p.low_speed) {
    const Lead *closest = nullptr;
    for (const auto &r : in.radar_tracks) {
      if (r.rel_x < p.close_distance && std::abs(r.rel_y) < in.lane_half_width &&
          (!closest || r.rel_x < closest->rel_x))
        closest = &r;
    }
    if (closest) {
      out.primary = *closest;
      out.decision = FusionDecision::low_speed_radar;
      return out;
    }
  }

  const Lead *camera = nullptr;
  for (const auto &c : in.camera_leads) {
    if (!camera || c.confidence.value_or(0.0) > camera->confidence.value_or(0.0)) camera = &c;
  }
  if (!camera || !(camera->confidence.value_or(0.0) > p.min_confidence)) {
    out.decision = FusionDecision::low_confidence;
    return out;
  }

  const double gate_x = p.match_base + p.match_gain * std::max(0.0, camera->rel_x);
  const Lead *match = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const auto &r : in.radar_tracks) {
    const double dx = std::abs(r.rel_x - camera->rel_x);
    if (dx < gate_x && std::abs(r.rel_v - camera->rel_v) < p.match_speed && dx < best) {
      best = dx;
      match = &r;
    }
  }
  if (match) {
    out.primary = *match;
    out.decision = FusionDecision::radar_match;
  } else {
    out.primary = *camera;
    out.decision = FusionDecision::camera_only;
  }
  return out;
}

}  // namespace fused
