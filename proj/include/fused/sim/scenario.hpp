#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "fused/core/errors.hpp"
#include "fused/sim/types.hpp"

namespace fused {

inline constexpr std::size_t kFieldsPerNpc = 1 + 2 * kWaypointCount;
inline constexpr std::size_t kLightingOffset = kNpcCount * kFieldsPerNpc;
inline constexpr std::size_t kWeatherOffset = kLightingOffset + 2;
inline constexpr std::size_t kGenomeSize = kWeatherOffset + 8;
static_assert(kGenomeSize == 76);

/// Flat search vector: six NPCs (model type, then five waypoints of
/// speed delta and lane change), sun azimuth/altitude, eight weather fields.
struct ScenarioGenome {
  std::array<double, kGenomeSize> values{};

  double &operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  friend bool operator==(const ScenarioGenome &, const ScenarioGenome &) = default;
};

inline constexpr std::size_t model_index(int npc) {
  return static_cast<std::size_t>(npc) * kFieldsPerNpc;
}
inline constexpr std::size_t speed_index(int npc, int waypoint) {
  return model_index(npc) + 1 + 2 * static_cast<std::size_t>(waypoint);
}
inline constexpr std::size_t lane_change_index(int npc, int waypoint) {
  return speed_index(npc, waypoint) + 1;
}

inline constexpr const char *kWeatherFieldNames[8] = {
    "cloudiness", "precipitation", "precipitation_deposits", "wind_intensity",
    "fog_density", "fog_distance", "wetness", "fog_falloff"};

struct GenomeBounds {
  std::array<double, kGenomeSize> lower{};
  std::array<double, kGenomeSize> upper{};
  std::array<bool, kGenomeSize> discrete{};

  bool contains(const ScenarioGenome &g) const {
    for (std::size_t i = 0; i < kGenomeSize; ++i) {
      if (!(g[i] >= lower[i] && g[i] <= upper[i])) return false;
      if (discrete[i] && std::floor(g[i]) != g[i]) return false;
    }
    return true;
  }
};

inline GenomeBounds make_bounds(int model_count) {
  GenomeBounds b;
  for (int n = 0; n < kNpcCount; ++n) {
    b.lower[model_index(n)] = 0;
    b.upper[model_index(n)] = model_count - 1;
    b.discrete[model_index(n)] = true;
    for (int w = 0; w < kWaypointCount; ++w) {
      b.lower[speed_index(n, w)] = -100;
      b.upper[speed_index(n, w)] = 50;
      b.lower[lane_change_index(n, w)] = 0;
      b.upper[lane_change_index(n, w)] = 2;
      b.discrete[lane_change_index(n, w)] = true;
    }
  }
  b.lower[kLightingOffset] = 0;
  b.upper[kLightingOffset] = 360;
  b.lower[kLightingOffset + 1] = -90;
  b.upper[kLightingOffset + 1] = 90;
  constexpr double weather_hi[8] = {100, 80, 80, 50, 15, 100, 40, 2};
  for (std::size_t i = 0; i < 8; ++i) {
    b.lower[kWeatherOffset + i] = 0;
    b.upper[kWeatherOffset + i] = weather_hi[i];
  }
  return b;
}

inline GenomeBounds make_bounds(const Environment &env) {
  return make_bounds(env.model_count);
}

enum class LaneChangeCommand { none = 0, left = 1, right = 2 };

struct Waypoint {
  double speed_delta = 0.0;  // percent of the speed limit, [-100, 50]
  LaneChangeCommand lane_change = LaneChangeCommand::none;
};

struct NpcPlan {
  int model = 0;
  VehicleKind kind = VehicleKind::car;
  std::array<Waypoint, kWaypointCount> waypoints{};
};

/// A decoded genome: what each NPC does and the weather it happens in.
struct ScenarioSpec {
  std::array<NpcPlan, kNpcCount> npcs{};
  WeatherState weather;
};

inline ScenarioSpec decode(const ScenarioGenome &g, const Environment &env) {
  const GenomeBounds bounds = make_bounds(env);
  for (std::size_t i = 0; i < kGenomeSize; ++i) {
    if (!(g[i] >= bounds.lower[i] && g[i] <= bounds.upper[i])) {
      throw DecodeError("genome coordinate " + std::to_string(i) + " = " +
                        std::to_string(g[i]) + " outside [" +
                        std::to_string(bounds.lower[i]) + ", " +
                        std::to_string(bounds.upper[i]) + "]");
    }
    if (bounds.discrete[i] && std::floor(g[i]) != g[i]) {
      throw DecodeError("genome coordinate " + std::to_string(i) +
                        " must be integral, got " + std::to_string(g[i]));
    }
  }
  ScenarioSpec spec;
  for (int n = 0; n < kNpcCount; ++n) {
    NpcPlan &plan = spec.npcs[static_cast<std::size_t>(n)];
    plan.model = static_cast<int>(g[model_index(n)]);
    plan.kind = model_kind(plan.model);
    for (int w = 0; w < kWaypointCount; ++w) {
      auto &wp = plan.waypoints[static_cast<std::size_t>(w)];
      wp.speed_delta = g[speed_index(n, w)];
      wp.lane_change =
          static_cast<LaneChangeCommand>(static_cast<int>(g[lane_change_index(n, w)]));
    }
  }
  WeatherState &w = spec.weather;
  w.sun_azimuth = g[kLightingOffset];
  w.sun_altitude = g[kLightingOffset + 1];
  w.cloudiness = g[kWeatherOffset + 0];
  w.precipitation = g[kWeatherOffset + 1];
  w.precipitation_deposits = g[kWeatherOffset + 2];
  w.wind_intensity = g[kWeatherOffset + 3];
  w.fog_density = g[kWeatherOffset + 4];
  w.fog_distance = g[kWeatherOffset + 5];
  w.wetness = g[kWeatherOffset + 6];
  w.fog_falloff = g[kWeatherOffset + 7];
  return spec;
}

/// Inverse of decode for the weather block; handy when authoring scenarios.
inline void set_weather(ScenarioGenome &g, const WeatherState &w) {
  g[kLightingOffset] = w.sun_azimuth;
  g[kLightingOffset + 1] = w.sun_altitude;
  g[kWeatherOffset + 0] = w.cloudiness;
  g[kWeatherOffset + 1] = w.precipitation;
  g[kWeatherOffset + 2] = w.precipitation_deposits;
  g[kWeatherOffset + 3] = w.wind_intensity;
  g[kWeatherOffset + 4] = w.fog_density;
  g[kWeatherOffset + 5] = w.fog_distance;
  g[kWeatherOffset + 6] = w.wetness;
  g[kWeatherOffset + 7] = w.fog_falloff;
}

}  // namespace fused
