#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "fused/core/rng.hpp"
#include "fused/fusion/best_sensor.hpp"
#include "fused/fusion/default_fusion.hpp"
#include "fused/fusion/mathworks.hpp"
#include "fused/sensors/camera.hpp"
#include "fused/sensors/dbscan.hpp"
#include "fused/sensors/radar.hpp"
#include "fused/sim/config.hpp"
#include "fused/sim/scenario.hpp"
#include "fused/sim/world.hpp"

namespace fused {

/// Replace the run's fusion by another method on ticks whose time lies in
/// [t_start, t_end].
struct OverrideWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  FusionMethod method = FusionMethod::best_sensor;

  friend bool operator==(const OverrideWindow &, const OverrideWindow &) = default;
};

struct TraceFrame {
  int tick = 0;
  double time = 0.0;
  double ego_pos = 0.0;
  double ego_speed = 0.0;
  std::vector<Lead> camera_leads;
  std::vector<Lead> radar_leads;
  MaybeLead fusion_out;
  MaybeLead fusion_secondary;
  FusionDecision decision = FusionDecision::low_confidence;
  bool overridden = false;
  MaybeLead ground_truth;
  double accel_cmd = 0.0;
  std::vector<VehicleState> npcs;

  friend bool operator==(const TraceFrame &, const TraceFrame &) = default;
};

struct SimulationTrace {
  std::vector<TraceFrame> frames;
  ScenarioGenome scenario;
  SimConfig config;
  FusionMethod fusion_method = FusionMethod::default_rule;
  std::optional<OverrideWindow> override_window;
  std::optional<CollisionEvent> collision;

  bool collided() const { return collision.has_value(); }
};

/// Runs one fusion method tick by tick, owning whatever state it carries.
class FusionEngine {
 public:
  explicit FusionEngine(FusionMethod m, const SimConfig &cfg) : method_(m), cfg_(&cfg) {}

  FusionOutput step(const FusionInput &in, const MaybeLead &gt) {
    switch (method_) {
      case FusionMethod::default_rule: return default_fusion(in, cfg_->default_fusion);
      case FusionMethod::mathworks: return mathworks_fusion(tracker_, in, cfg_->tracker);
      case FusionMethod::mathworks_plus: return mathworks_plus(tracker_, in, cfg_->tracker);
      case FusionMethod::best_sensor: return best_sensor_fusion(in, gt, cfg_->oracle_thresholds);
    }
    return {};
  }
  FusionMethod method() const { return method_; }

 private:
  FusionMethod method_;
  const SimConfig *cfg_;
  TrackerState tracker_;
};

/// Sensor readings of one tick, packaged for fusion.
inline FusionInput sense(const WorldState &w, const SimConfig &cfg, int tick, StreamId cam_id,
                         StreamId radar_id) {
  FusionInput in;
  in.tick = tick;
  in.ego_speed = w.ego.speed;
  in.lane_half_width = cfg.lane_half_width();
  auto cam_rng = make_stream(cfg.rng_seed, static_cast<std::uint64_t>(tick), cam_id);
  in.camera_leads = camera_sense(w, cfg.noise, cam_rng);
  auto radar_rng = make_stream(cfg.rng_seed, static_cast<std::uint64_t>(tick), radar_id);
  const auto returns = radar_sense(w, cfg.noise, radar_rng);
  for (const auto &t : dbscan_cluster(returns, cfg.noise.radar.dbscan_eps,
                                      cfg.noise.radar.dbscan_min_samples))
    in.radar_tracks.push_back(t.to_lead());
  return in;
}

namespace detail {

inline bool tick_in_window(int tick, double hz, const OverrideWindow &w) {
  const auto first = static_cast<long long>(std::ceil(w.t_start * hz - 1e-9));
  const auto last = static_cast<long long>(std::floor(w.t_end * hz + 1e-9));
  return tick >= first && tick <= last;
}

}  // namespace detail

/// Deterministic closed-loop run: every control tick senses, fuses and
/// commands the ego, then advances physics for one control period.
inline SimulationTrace run_simulation(const ScenarioGenome &genome, FusionMethod fusion,
                                      const SimConfig &cfg,
                                      const std::optional<OverrideWindow> &override_window = {}) {
  cfg.validate();
  if (override_window && !(override_window->t_start < override_window->t_end))
    throw ConfigError("override window requires t_start < t_end");
  const ScenarioSpec spec = decode(genome, cfg.env);

  SimulationTrace trace;
  trace.scenario = genome;
  trace.config = cfg;
  trace.fusion_method = fusion;
  trace.override_window = override_window;

  FusionEngine primary(fusion, cfg);
  std::optional<FusionEngine> shadow;
  if (override_window) shadow.emplace(override_window->method, cfg);

  WorldState world = initial_world(spec, cfg.env);
  const double period = cfg.control_period();

  for (int k = 0; k < cfg.warmup_ticks(); ++k) {
    const MaybeLead gt = ground_truth_lead(world, cfg.sensing_horizon);
    const FusionInput in = sense(world, cfg, k, StreamId::warmup_camera, StreamId::warmup_radar);
    primary.step(in, gt);
    if (shadow) shadow->step(in, gt);
  }

  StepContext ctx;
  ctx.waypoint_interval = cfg.horizon / kWaypointCount;
  ctx.npc = cfg.npc;
  const int steps = cfg.steps_per_tick();
  const int ticks = cfg.tick_count();
  trace.frames.reserve(static_cast<std::size_t>(ticks));

  for (int k = 0; k < ticks && !world.frozen(); ++k) {
    TraceFrame f;
    f.tick = k;
    f.time = k * period;
    f.ego_pos = world.ego.longitudinal_pos;
    f.ego_speed = world.ego.speed;
    f.npcs = world.npcs;
    f.ground_truth = ground_truth_lead(world, cfg.sensing_horizon);

    FusionInput in = sense(world, cfg, k, StreamId::camera, StreamId::radar);
    FusionOutput out = primary.step(in, f.ground_truth);
    if (shadow) {
      FusionOutput alt = shadow->step(in, f.ground_truth);
      if (detail::tick_in_window(k, cfg.control_hz, *override_window)) {
        out = alt;
        f.overridden = true;
      }
    }
    f.fusion_out = out.primary;
    f.fusion_secondary = out.secondary;
    f.decision = out.decision;
    f.accel_cmd =
        ego_longitudinal_control(out.primary, world.ego.speed, cfg.env.speed_limit, cfg.controller);
    f.camera_leads = std::move(in.camera_leads);
    f.radar_leads = std::move(in.radar_tracks);
    trace.frames.push_back(std::move(f));

    const double accel = trace.frames.back().accel_cmd;
    for (int s = 0; s < steps; ++s) {
      world = step_world(world, accel, spec, cfg.physics_dt, ctx);
      world.time = static_cast<double>(static_cast<long long>(k) * steps + s + 1) * cfg.physics_dt;
      if (world.collision) {
        world.collision->time = world.time;
        break;
      }
    }
  }
  trace.collision = world.collision;
  return trace;
}

namespace detail {

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ull;
  void bytes(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  }
  void num(double d) { bytes(std::bit_cast<std::uint64_t>(d)); }
  void num(int i) { bytes(static_cast<std::uint64_t>(static_cast<std::int64_t>(i))); }
  void lead(const MaybeLead &l) {
    num(l ? 1 : 0);
    if (!l) return;
    num(l->rel_x);
    num(l->rel_y);
    num(l->rel_v);
    num(l->confidence ? 1 : 0);
    if (l->confidence) num(*l->confidence);
  }
};

}  // namespace detail

/// Order-sensitive hash over the bit patterns of every frame and the
/// collision event; equal digests mean bit-identical traces in practice.
inline std::uint64_t trace_digest(const SimulationTrace &t) {
  detail::Fnv1a h;
  h.num(static_cast<int>(t.frames.size()));
  for (const auto &f : t.frames) {
    h.num(f.tick);
    h.num(f.time);
    h.num(f.ego_pos);
    h.num(f.ego_speed);
    h.num(static_cast<int>(f.camera_leads.size()));
    for (const auto &l : f.camera_leads) h.lead(l);
    h.num(static_cast<int>(f.radar_leads.size()));
    for (const auto &l : f.radar_leads) h.lead(l);
    h.lead(f.fusion_out);
    h.lead(f.fusion_secondary);
    h.num(static_cast<int>(f.decision));
    h.num(f.overridden ? 1 : 0);
    h.lead(f.ground_truth);
    h.num(f.accel_cmd);
    for (const auto &v : f.npcs) {
      h.num(v.lane_index);
      h.num(v.lateral_offset);
      h.num(v.longitudinal_pos);
      h.num(v.speed);
    }
  }
  h.num(t.collision ? 1 : 0);
  if (t.collision) {
    h.num(t.collision->time);
    h.num(t.collision->npc_id);
    h.num(t.collision->ego_speed_at_impact);
  }
  return h.h;
}

}  // namespace fused
