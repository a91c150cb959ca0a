#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "fused/core/lead.hpp"
#include "fused/sensors/geometry.hpp"
#include "fused/sensors/noise_model.hpp"

namespace fused {

struct RadarReturn {
  double rel_x = 0.0;
  double rel_y = 0.0;
  double rel_v = 0.0;

  friend bool operator==(const RadarReturn &, const RadarReturn &) = default;
};

/// Raw returns: returns_per_target noisy points on each detected body plus
/// stationary Poisson clutter, all restricted to the radar field of view.
/// Relative speed is the longitudinal component only.
inline std::vector<RadarReturn> radar_sense(const WorldState &w, const SensorNoiseModel &noise,
                                            std::mt19937_64 &rng) {
  const RadarNoise &r = noise.radar;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double kappa = w.road.curvature;

  std::vector<RadarReturn> out;
  for (const auto &t : forward_targets(w)) {
    if (t.occluded) continue;
    if (!in_fov(t.rel_x, sensor_lateral(t.rel_x, t.rel_y, kappa), r.range, r.half_fov_deg))
      continue;
    const double u_detect = uniform(rng);
    const double ox = r.sigma_x * normal(rng);
    const double oy = r.sigma_y * normal(rng);
    const double ov = r.sigma_v * normal(rng);
    const bool detected = u_detect < r.detection_probability[kind_index(t.npc->kind)];
    for (int k = 0; k < r.returns_per_target; ++k) {
      const double jx = normal(rng), jy = normal(rng), jv = normal(rng);
      if (!detected) continue;
      out.push_back({t.rel_x + ox + r.return_scatter * jx, t.rel_y + oy + r.return_scatter * jy,
                     t.rel_v + ov + 0.5 * r.return_scatter * jv});
    }
  }

  const double rate = r.clutter_rate + r.wetness_clutter_gain * w.weather.wetness;
  if (rate > 0.0) {
    std::poisson_distribution<int> clutter(rate);
    const int n = clutter(rng);
    for (int i = 0; i < n; ++i) {
      const double x = 1.0 + (r.clutter_range - 1.0) * uniform(rng);
      const double bearing = deg_to_rad(r.half_fov_deg) * (2.0 * uniform(rng) - 1.0);
      const double y = x * std::tan(bearing) - 0.5 * kappa * x * x;
      out.push_back({x, y, -w.ego.speed + 0.1 * normal(rng)});
    }
  }

  std::erase_if(out, [&](const RadarReturn &p) {
    return !in_fov(p.rel_x, sensor_lateral(p.rel_x, p.rel_y, kappa), r.range, r.half_fov_deg);
  });
  return out;
}

}  // namespace fused
