#pragma once

#include "fused/fusion/types.hpp"
#include "fused/objectives/dist.hpp"

namespace fused {

/// Oracle fusion: the sensor lead closest to ground truth under dist(), ties
/// broken by smaller l1 residual and then camera before radar. Consumes
/// ground truth, so only replay machinery may call it.
inline FusionOutput best_sensor_fusion(const FusionInput &in, const MaybeLead &gt,
                                       const DistThresholds &th = {}) {
  FusionOutput out;
  out.method = FusionMethod::best_sensor;
  out.decision = FusionDecision::oracle;
  if (!gt) return out;

  const Lead *best = nullptr;
  int best_count = 0;
  double best_l1 = 0.0;
  auto consider = [&](const Lead &l) {
    const int c = dist(l, gt, th);
    const double r = l1_residual(l, *gt);
    if (!best || c < best_count || (c == best_count && r < best_l1)) {
      best = &l;
      best_count = c;
      best_l1 = r;
    }
  };
  for (const auto &l : in.camera_leads) consider(l);
  for (const auto &l : in.radar_tracks) consider(l);
  if (best) out.primary = *best;
  return out;
}

}  // namespace fused
