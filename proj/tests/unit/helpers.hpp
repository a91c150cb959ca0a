#pragma once

#include <random>

#include "fused/fused.hpp"

namespace fused::testing {

inline ScenarioGenome random_genome(std::uint64_t seed, const Environment &env = s1_environment()) {
  std::mt19937_64 rng(seed);
  return sample_random(make_bounds(env), rng);
}

/// A bare world: ego in lane 1 at the origin, no NPCs.
inline WorldState empty_world(double ego_speed = 10.0) {
  WorldState w;
  w.road = s1_environment().road();
  w.ego = make_vehicle(0, VehicleKind::car, 1, 0.0, ego_speed);
  return w;
}

inline VehicleState npc_at(int id, int lane, double pos, double speed,
                           VehicleKind kind = VehicleKind::car) {
  return make_vehicle(id, kind, lane, pos, speed);
}

}  // namespace fused::testing
