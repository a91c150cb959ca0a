#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "fused/core/lead.hpp"
#include "fused/sensors/geometry.hpp"
#include "fused/sensors/noise_model.hpp"

namespace fused {

/// Camera leads are ordinary leads that always carry a confidence.
using CameraLead = Lead;

/// Weather and lighting multiplier on camera confidence, in [0, 1].
inline double camera_weather_factor(const WeatherState &w, const CameraNoise &c) {
  const double fog = std::clamp(1.0 - c.fog_penalty * w.fog_density, 0.0, 1.0);
  const double rain = std::clamp(1.0 - c.precipitation_penalty * w.precipitation, 0.0, 1.0);
  const double cloud = std::clamp(1.0 - c.cloudiness_penalty * w.cloudiness, 0.0, 1.0);
  const double dark_deg = std::max(0.0, c.darkness_threshold - w.sun_altitude);
  const double light = std::clamp(1.0 - c.darkness_penalty * dark_deg, 0.0, 1.0);
  return fog * rain * cloud * light;
}

/// Noise-free camera confidence for one target.
inline double camera_confidence(const TargetGeometry &t, const WeatherState &w,
                                const CameraNoise &c) {
  const double det = c.detectability[kind_index(t.npc->kind)];
  const double path = c.path_floor + (1.0 - c.path_floor) * t.lane_overlap;
  const double range =
      std::clamp(1.0 - c.range_penalty * std::max(0.0, t.rel_x - c.range_onset), 0.0, 1.0);
  return std::clamp(c.base_confidence * det * path * range * camera_weather_factor(w, c),
                    0.0, 100.0);
}

inline double camera_noise_scale(const WeatherState &w, const CameraNoise &c) {
  const double dark_deg = std::max(0.0, c.darkness_threshold - w.sun_altitude);
  return 1.0 + c.fog_noise_gain * w.fog_density +
         c.precipitation_noise_gain * w.precipitation + c.darkness_noise_gain * dark_deg;
}

/// One lead per visible NPC in the camera's field of view, sorted by range.
/// Every visible target consumes the same number of draws whether or not it
/// drops out, so streams stay aligned across scenes.
inline std::vector<CameraLead> camera_sense(const WorldState &w, const SensorNoiseModel &noise,
                                            std::mt19937_64 &rng) {
  const CameraNoise &c = noise.camera;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double scale = camera_noise_scale(w.weather, c);
  const double bias = c.fog_range_bias * w.weather.fog_density;

  std::vector<CameraLead> leads;
  for (const auto &t : forward_targets(w)) {
    if (t.occluded) continue;
    if (!in_fov(t.rel_x, sensor_lateral(t.rel_x, t.rel_y, w.road.curvature), c.range,
                c.half_fov_deg))
      continue;
    const double u_drop = uniform(rng);
    const double nx = normal(rng), ny = normal(rng), nv = normal(rng), nc = normal(rng);
    if (u_drop < c.dropout) continue;
    const double sx = c.sigma_x * (1.0 + c.sigma_range_gain * t.rel_x) * scale;
    Lead lead;
    lead.rel_x = t.rel_x * (1.0 + bias) + sx * nx;
    lead.rel_y = t.rel_y + c.sigma_y * scale * ny;
    lead.rel_v = t.rel_v + c.sigma_v * scale * nv;
    lead.confidence = std::clamp(camera_confidence(t, w.weather, c) + c.sigma_confidence * nc,
                                 0.0, 100.0);
    leads.push_back(lead);
  }
  std::stable_sort(leads.begin(), leads.end(),
                   [](const Lead &a, const Lead &b) { return a.rel_x < b.rel_x; });
  return leads;
}

}  // namespace fused
