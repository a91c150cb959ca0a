#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "fused/core/errors.hpp"
#include "fused/fusion/default_fusion.hpp"
#include "fused/fusion/mathworks.hpp"
#include "fused/objectives/dist.hpp"
#include "fused/sensors/noise_model.hpp"
#include "fused/sim/controller.hpp"
#include "fused/sim/types.hpp"
#include "fused/sim/world.hpp"

namespace fused {

/// Everything a single simulation run depends on besides the genome and the
/// fusion method.
struct SimConfig {
  double physics_dt = 0.01;
  double control_hz = 20.0;
  double horizon = 20.0;
  double warmup = 0.0;
  std::uint64_t rng_seed = 0;
  /// Ground-truth lead search range, equal to the radar range.
  double sensing_horizon = 174.0;

  Environment env = s1_environment();
  ControllerParams controller;
  NpcParams npc;
  SensorNoiseModel noise;
  DefaultFusionParams default_fusion;
  TrackerParams tracker;
  /// Thresholds the best-sensor oracle ranks leads with.
  DistThresholds oracle_thresholds;

  double control_period() const { return 1.0 / control_hz; }
  int steps_per_tick() const {
    return static_cast<int>(std::llround(control_period() / physics_dt));
  }
  int tick_count() const { return static_cast<int>(std::llround(horizon * control_hz)); }
  int warmup_ticks() const { return static_cast<int>(std::llround(warmup * control_hz)); }
  double lane_half_width() const { return 0.5 * env.lane_width; }

  void validate() const {
    if (!(physics_dt > 0.0)) throw ConfigError("sim.physics_dt must be > 0");
    if (!(control_hz > 0.0)) throw ConfigError("sim.control_hz must be > 0");
    const double ratio = control_period() / physics_dt;
    if (std::llround(ratio) < 1 || std::abs(ratio - std::llround(ratio)) > 1e-9 * ratio)
      throw ConfigError("sim.control_hz: control period must be an integer multiple of physics_dt");
    if (!(horizon > 0.0)) throw ConfigError("sim.horizon must be > 0");
    const double hsteps = horizon / physics_dt;
    if (std::abs(hsteps - std::llround(hsteps)) > 1e-9 * hsteps)
      throw ConfigError("sim.horizon must be an integer multiple of physics_dt");
    const double hticks = horizon * control_hz;
    if (std::abs(hticks - std::llround(hticks)) > 1e-9 * hticks)
      throw ConfigError("sim.horizon must be an integer number of control periods");
    if (!(warmup >= 0.0)) throw ConfigError("sim.warmup must be >= 0");
    if (!(sensing_horizon > 0.0)) throw ConfigError("sim.sensing_horizon must be > 0");
    if (env.lane_count < 1) throw ConfigError("environment.lane_count must be >= 1");
    if (!(env.lane_width > 0.0)) throw ConfigError("environment.lane_width must be > 0");
    if (!(env.speed_limit > 0.0)) throw ConfigError("environment.speed_limit must be > 0");
    if (!(env.road_length > 0.0)) throw ConfigError("environment.road_length must be > 0");
    if (env.ego_lane < 0 || env.ego_lane >= env.lane_count)
      throw ConfigError("environment.ego_lane out of range");
    if (!(env.ego_initial_speed >= 0.0 && env.ego_initial_speed <= 1.5 * env.speed_limit))
      throw ConfigError("environment.ego_initial_speed must lie in [0, 1.5 * speed_limit]");
    if (!(env.npc_initial_speed >= 0.0 && env.npc_initial_speed <= 1.5 * env.speed_limit))
      throw ConfigError("environment.npc_initial_speed must lie in [0, 1.5 * speed_limit]");
    for (const auto &s : env.slots)
      if (s.lane < 0 || s.lane >= env.lane_count)
        throw ConfigError("environment.slots: lane out of range");
    if (env.model_count < 1) throw ConfigError("environment.model_count must be >= 1");
    if (!(controller.max_accel > 0 && controller.max_brake > 0))
      throw ConfigError("controller acceleration limits must be > 0");
    if (!(tracker.dt > 0)) throw ConfigError("tracker.dt must be > 0");
    if (tracker.max_missed < 0) throw ConfigError("tracker.max_missed must be >= 0");
    if (!(tracker.association_gate > 0)) throw ConfigError("tracker.association_gate must be > 0");
    if (!(tracker.camera_variance.minCoeff() > 0))
      throw ConfigError("tracker.camera_variance entries must be > 0");
    if (!(tracker.radar_variance.minCoeff() > 0))
      throw ConfigError("tracker.radar_variance entries must be > 0");
    noise.validate();
    oracle_thresholds.validate();
  }

  friend bool operator==(const SimConfig &, const SimConfig &) = default;
};

}  // namespace fused
