#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "fused/core/lead.hpp"
#include "fused/sim/scenario.hpp"
#include "fused/sim/types.hpp"

namespace fused {

/// Waypoint-following NPC behavior with a simple car-following guard so NPCs
/// do not drive through whatever is ahead of them in their lane.
struct NpcParams {
  double max_accel = 3.0;
  double max_brake = 3.0;
  double emergency_brake = 8.0;
  double k_speed = 1.0;
  double standstill_gap = 2.0;
  double headway = 1.0;
  double k_gap = 0.5;
  double k_closing = 1.0;
  double follow_range = 60.0;
  double lane_change_duration = 2.0;
  /// A lane change starts only once the target lane has this much room:
  /// a fixed gap plus a time margin on the closing speed.
  double merge_gap_behind = 1.0;
  double merge_time_behind = 0.3;
  double merge_gap_ahead = 2.0;
  double merge_time_ahead = 0.5;

  friend bool operator==(const NpcParams &, const NpcParams &) = default;
};

struct StepContext {
  double waypoint_interval = 4.0;  // horizon / waypoint count
  NpcParams npc;
};

inline double target_speed(const Waypoint &wp, double speed_limit) {
  return speed_limit * (1.0 + wp.speed_delta / 100.0);
}

inline VehicleState make_vehicle(int id, VehicleKind kind, int lane, double pos, double speed) {
  VehicleState v;
  v.id = id;
  v.kind = kind;
  const Dimensions d = dimensions_of(kind);
  v.length = d.length;
  v.width = d.width;
  v.lane_index = lane;
  v.longitudinal_pos = pos;
  v.speed = speed;
  return v;
}

/// NPCs spawn in their slots at the environment's initial speed and converge
/// to their waypoint speeds from there.
inline WorldState initial_world(const ScenarioSpec &spec, const Environment &env) {
  WorldState w;
  w.road = env.road();
  w.weather = spec.weather;
  w.ego = make_vehicle(0, VehicleKind::car, env.ego_lane, 0.0, env.ego_initial_speed);
  w.ego.waypoint = 0;
  for (int i = 0; i < kNpcCount; ++i) {
    const auto &plan = spec.npcs[static_cast<std::size_t>(i)];
    const auto &slot = env.slots[static_cast<std::size_t>(i)];
    w.npcs.push_back(make_vehicle(i + 1, plan.kind, slot.lane, slot.position, env.npc_initial_speed));
  }
  return w;
}

/// Do two footprints overlap with positive area?
inline bool bodies_overlap(const VehicleState &a, const VehicleState &b, double lane_width) {
  const double ox = std::min(a.front(), b.front()) - std::max(a.rear(), b.rear());
  const double ya = a.lateral(lane_width), yb = b.lateral(lane_width);
  const double oy = std::min(ya + 0.5 * a.width, yb + 0.5 * b.width) -
                    std::max(ya - 0.5 * a.width, yb - 0.5 * b.width);
  return ox > 0.0 && oy > 0.0;
}

/// Does the NPC's body reach into the ego's lane?
inline bool overlaps_ego_lane(const WorldState &w, const VehicleState &npc) {
  const double lw = w.road.lane_width;
  return std::abs(npc.lateral(lw) - w.ego.lateral(lw)) < 0.5 * lw + 0.5 * npc.width;
}

/// Nearest NPC ahead of the ego (center ahead) whose body overlaps the ego
/// lane, including partial cut-ins.
inline MaybeLead ground_truth_lead(const WorldState &w, double horizon) {
  const double lw = w.road.lane_width;
  MaybeLead best;
  for (const auto &npc : w.npcs) {
    if (!(npc.longitudinal_pos > w.ego.longitudinal_pos)) continue;
    if (!overlaps_ego_lane(w, npc)) continue;
    const double rel_x = npc.rear() - w.ego.front();
    if (rel_x > horizon) continue;
    if (!best || rel_x < best->rel_x)
      best = Lead{rel_x, npc.lateral(lw) - w.ego.lateral(lw), npc.speed - w.ego.speed,
                  std::nullopt};
  }
  return best;
}

inline std::optional<CollisionEvent> detect_collision(const WorldState &w) {
  for (const auto &npc : w.npcs) {
    if (!(npc.longitudinal_pos > w.ego.longitudinal_pos)) continue;
    if (bodies_overlap(w.ego, npc, w.road.lane_width))
      return CollisionEvent{w.time, npc.id, w.ego.speed, overlaps_ego_lane(w, npc)};
  }
  return std::nullopt;
}

namespace detail {

inline double npc_accel(const WorldState &w, const VehicleState &self, double v_target,
                        const NpcParams &p) {
  const double lw = w.road.lane_width;
  double a = std::clamp(p.k_speed * (v_target - self.speed), -p.max_brake, p.max_accel);
  const double y = self.lateral(lw);
  const VehicleState *ahead = nullptr;
  double gap = std::numeric_limits<double>::infinity();
  auto consider = [&](const VehicleState &o) {
    if (&o == &self || !(o.longitudinal_pos > self.longitudinal_pos)) return;
    if (!(std::abs(o.lateral(lw) - y) < 0.5 * lw + 0.5 * o.width - 0.5 * (lw - self.width)))
      return;
    const double g = o.rear() - self.front();
    if (g < gap) {
      gap = g;
      ahead = &o;
    }
  };
  consider(w.ego);
  for (const auto &o : w.npcs) consider(o);
  if (ahead && gap < p.follow_range) {
    const double follow = p.k_gap * (gap - (p.standstill_gap + p.headway * self.speed)) +
                          p.k_closing * (ahead->speed - self.speed);
    a = std::min(a, follow);
  }
  return std::clamp(a, -p.emergency_brake, p.max_accel);
}

/// Is there room for `self` to move into `lane`?
inline bool merge_is_safe(const WorldState &w, const VehicleState &self, int lane,
                          const NpcParams &p) {
  const double lw = w.road.lane_width;
  const double y = lane * lw;
  auto blocks = [&](const VehicleState &o) {
    if (&o == &self) return false;
    if (!(std::abs(o.lateral(lw) - y) < 0.5 * lw + 0.5 * o.width - 0.1)) return false;
    if (o.longitudinal_pos <= self.longitudinal_pos) {
      const double gap = self.rear() - o.front();
      return gap < p.merge_gap_behind + p.merge_time_behind * std::max(0.0, o.speed - self.speed);
    }
    const double gap = o.rear() - self.front();
    return gap < p.merge_gap_ahead + p.merge_time_ahead * std::max(0.0, self.speed - o.speed);
  };
  if (blocks(w.ego)) return false;
  for (const auto &o : w.npcs)
    if (blocks(o)) return false;
  return true;
}

inline void advance_lane_change(VehicleState &v, double dt, double lane_width, double duration) {
  if (!v.lane_change) return;
  auto &lc = *v.lane_change;
  lc.elapsed += dt;
  const double dir = lc.target_lane > v.lane_index ? 1.0 : -1.0;
  if (lc.elapsed >= duration - 1e-9) {
    v.lane_index = lc.target_lane;
    v.lateral_offset = 0.0;
    v.lane_change.reset();
  } else {
    v.lateral_offset = dir * lane_width * (lc.elapsed / duration);
  }
}

}  // namespace detail

/// One forward-Euler physics step. The ego follows accel_cmd; NPCs follow
/// their active waypoint. Returns the input unchanged once a collision has
/// frozen the world.
inline WorldState step_world(const WorldState &state, double accel_cmd, const ScenarioSpec &spec,
                             double dt, const StepContext &ctx = {}) {
  if (state.frozen()) return state;
  WorldState next = state;
  const double limit = state.road.speed_limit;
  const double v_max = 1.5 * limit;
  const double lw = state.road.lane_width;

  for (std::size_t i = 0; i < next.npcs.size(); ++i) {
    VehicleState &npc = next.npcs[i];
    const auto &plan = spec.npcs[i];
    const int wp = std::min(kWaypointCount - 1,
                            static_cast<int>(std::floor(state.time / ctx.waypoint_interval + 1e-9)));
    if (wp != npc.waypoint) {
      npc.waypoint = wp;
      npc.pending_lane = -1;
      const auto cmd = plan.waypoints[static_cast<std::size_t>(wp)].lane_change;
      if (!npc.lane_change && cmd != LaneChangeCommand::none) {
        const int target = npc.lane_index + (cmd == LaneChangeCommand::left ? 1 : -1);
        if (target >= 0 && target < state.road.lane_count) npc.pending_lane = target;
      }
    }
    if (npc.pending_lane >= 0 &&
        detail::merge_is_safe(state, state.npcs[i], npc.pending_lane, ctx.npc)) {
      npc.lane_change = LaneChange{npc.pending_lane, 0.0};
      npc.pending_lane = -1;
    }
    const double v_target =
        std::clamp(target_speed(plan.waypoints[static_cast<std::size_t>(wp)], limit), 0.0, v_max);
    const double a = detail::npc_accel(state, state.npcs[i], v_target, ctx.npc);
    npc.longitudinal_pos += npc.speed * dt;
    npc.speed = std::clamp(npc.speed + a * dt, 0.0, v_max);
    detail::advance_lane_change(npc, dt, lw, ctx.npc.lane_change_duration);
  }

  next.ego.longitudinal_pos += next.ego.speed * dt;
  next.ego.speed = std::clamp(next.ego.speed + accel_cmd * dt, 0.0, v_max);
  next.time = state.time + dt;
  next.collision = detect_collision(next);
  return next;
}

}  // namespace fused
