#pragma once

#include <array>
#include <string>

#include "fused/core/errors.hpp"
#include "fused/sim/types.hpp"

namespace fused {

/// Parametric stand-in for a learned camera lead detector. Confidence is a
/// product of per-factor multipliers, each linear in one weather field.
struct CameraNoise {
  double sigma_x = 0.8;
  double sigma_y = 0.2;
  double sigma_v = 0.6;
  double sigma_confidence = 8.0;
  double base_confidence = 100.0;
  double range = 174.0;
  double half_fov_deg = 30.0;
  // car, truck, motorcycle, bicycle
  std::array<double, 4> detectability{1.0, 1.0, 0.75, 0.6};
  double fog_penalty = 0.02;             // per fog_density unit
  double precipitation_penalty = 0.002;  // per precipitation unit
  double cloudiness_penalty = 0.0005;     // per cloudiness unit
  double darkness_threshold = 0.0;       // sun altitude, degrees
  double darkness_penalty = 0.003;       // per degree below the threshold
  /// Confidence multiplier for a target with no overlap with the ego lane;
  /// rises linearly to 1 at full overlap.
  double path_floor = 0.35;
  double range_onset = 20.0;
  double range_penalty = 0.002;  // per meter beyond range_onset
  double dropout = 0.02;
  double sigma_range_gain = 0.01;  // relative sigma growth per meter
  double fog_noise_gain = 0.08;
  double precipitation_noise_gain = 0.005;
  double darkness_noise_gain = 0.01;
  double fog_range_bias = 0.005;  // fractional range over-estimate per fog unit

  friend bool operator==(const CameraNoise &, const CameraNoise &) = default;
};

struct RadarNoise {
  double sigma_x = 0.3;
  double sigma_y = 0.4;
  double sigma_v = 0.25;
  /// Per-return jitter around the target's common offset.
  double return_scatter = 0.1;
  int returns_per_target = 6;
  double clutter_rate = 2.0;  // returns per tick
  double wetness_clutter_gain = 0.05;
  double clutter_range = 80.0;
  double range = 174.0;
  double half_fov_deg = 15.0;
  // car, truck, motorcycle, bicycle
  std::array<double, 4> detection_probability{0.98, 0.99, 0.85, 0.7};
  double dbscan_eps = 0.5;
  int dbscan_min_samples = 5;

  friend bool operator==(const RadarNoise &, const RadarNoise &) = default;
};

struct SensorNoiseModel {
  CameraNoise camera;
  RadarNoise radar;

  /// Every stochastic term switched off: sensors report ground truth.
  static SensorNoiseModel noiseless() {
    SensorNoiseModel m;
    m.camera.sigma_x = m.camera.sigma_y = m.camera.sigma_v = 0.0;
    m.camera.sigma_confidence = 0.0;
    m.camera.dropout = 0.0;
    m.camera.fog_range_bias = 0.0;
    m.radar.sigma_x = m.radar.sigma_y = m.radar.sigma_v = 0.0;
    m.radar.return_scatter = 0.0;
    m.radar.clutter_rate = 0.0;
    m.radar.wetness_clutter_gain = 0.0;
    m.radar.detection_probability = {1.0, 1.0, 1.0, 1.0};
    return m;
  }

  void validate() const {
    auto nonneg = [](const char *name, double v) {
      if (!(v >= 0.0)) throw ConfigError(std::string(name) + " must be >= 0");
    };
    auto prob = [](const char *name, double v) {
      if (!(v >= 0.0 && v <= 1.0))
        throw ConfigError(std::string(name) + " must lie in [0,1]");
    };
    nonneg("noise.camera.sigma_x", camera.sigma_x);
    nonneg("noise.camera.sigma_y", camera.sigma_y);
    nonneg("noise.camera.sigma_v", camera.sigma_v);
    nonneg("noise.camera.sigma_confidence", camera.sigma_confidence);
    nonneg("noise.camera.fog_penalty", camera.fog_penalty);
    nonneg("noise.camera.precipitation_penalty", camera.precipitation_penalty);
    nonneg("noise.camera.cloudiness_penalty", camera.cloudiness_penalty);
    nonneg("noise.camera.darkness_penalty", camera.darkness_penalty);
    nonneg("noise.camera.range_penalty", camera.range_penalty);
    prob("noise.camera.dropout", camera.dropout);
    prob("noise.camera.path_floor", camera.path_floor);
    for (double d : camera.detectability) prob("noise.camera.detectability", d);
    if (!(camera.base_confidence >= 0 && camera.base_confidence <= 100))
      throw ConfigError("noise.camera.base_confidence must lie in [0,100]");
    nonneg("noise.radar.sigma_x", radar.sigma_x);
    nonneg("noise.radar.sigma_y", radar.sigma_y);
    nonneg("noise.radar.sigma_v", radar.sigma_v);
    nonneg("noise.radar.return_scatter", radar.return_scatter);
    nonneg("noise.radar.clutter_rate", radar.clutter_rate);
    nonneg("noise.radar.wetness_clutter_gain", radar.wetness_clutter_gain);
    for (double p : radar.detection_probability)
      prob("noise.radar.detection_probability", p);
    if (radar.returns_per_target < 0)
      throw ConfigError("noise.radar.returns_per_target must be >= 0");
    if (!(radar.dbscan_eps > 0)) throw ConfigError("noise.radar.dbscan_eps must be > 0");
    if (radar.dbscan_min_samples < 1)
      throw ConfigError("noise.radar.dbscan_min_samples must be >= 1");
  }

  friend bool operator==(const SensorNoiseModel &, const SensorNoiseModel &) = default;
};

inline std::size_t kind_index(VehicleKind k) { return static_cast<std::size_t>(k); }

}  // namespace fused
