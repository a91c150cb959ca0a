#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fused/sim/types.hpp"

namespace fused {

/// Where an NPC sits relative to the ego's front bumper.
struct TargetGeometry {
  const VehicleState *npc = nullptr;
  double rel_x = 0.0;  // ego front bumper to target rear bumper
  double rel_y = 0.0;  // center-to-center, positive left
  double rel_v = 0.0;  // target speed minus ego speed
  double lane_overlap = 0.0;  // fraction of target width inside the ego lane
  bool occluded = false;
};

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Lateral coordinate as a sensor sees it on a curved road.
inline double sensor_lateral(double rel_x, double rel_y, double curvature) {
  return rel_y + 0.5 * curvature * rel_x * rel_x;
}

inline bool in_fov(double rel_x, double cart_y, double range, double half_fov_deg) {
  if (!(rel_x > 0.0) || rel_x > range) return false;
  return std::atan2(std::abs(cart_y), rel_x) <= deg_to_rad(half_fov_deg);
}

inline double lane_overlap_fraction(double center, double width, double lane_center,
                                    double lane_half_width) {
  const double lo = std::max(center - 0.5 * width, lane_center - lane_half_width);
  const double hi = std::min(center + 0.5 * width, lane_center + lane_half_width);
  return std::clamp((hi - lo) / width, 0.0, 1.0);
}

/// NPCs whose rear bumper is ahead of the ego's front bumper, in id order.
/// A target is occluded when a nearer one spans its lateral center line.
inline std::vector<TargetGeometry> forward_targets(const WorldState &w) {
  const double lw = w.road.lane_width;
  const double ego_y = w.ego.lateral(lw);
  std::vector<TargetGeometry> out;
  out.reserve(w.npcs.size());
  for (const auto &npc : w.npcs) {
    const double rel_x = npc.rear() - w.ego.front();
    if (!(rel_x > 0.0)) continue;
    TargetGeometry t;
    t.npc = &npc;
    t.rel_x = rel_x;
    t.rel_y = npc.lateral(lw) - ego_y;
    t.rel_v = npc.speed - w.ego.speed;
    t.lane_overlap = lane_overlap_fraction(t.rel_y, npc.width, 0.0, 0.5 * lw);
    out.push_back(t);
  }
  for (auto &b : out) {
    for (const auto &a : out) {
      if (&a == &b || !(a.rel_x < b.rel_x)) continue;
      if (std::abs(b.rel_y - a.rel_y) < 0.5 * a.npc->width) {
        b.occluded = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace fused
