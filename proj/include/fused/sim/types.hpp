#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fused/core/errors.hpp"

namespace fused {

enum class VehicleKind { car, truck, motorcycle, bicycle };

inline std::string_view to_string(VehicleKind k) {
  switch (k) {
    case VehicleKind::car: return "car";
    case VehicleKind::truck: return "truck";
    case VehicleKind::motorcycle: return "motorcycle";
    case VehicleKind::bicycle: return "bicycle";
  }
  return "car";
}

struct Dimensions {
  double length;
  double width;
};

inline constexpr Dimensions dimensions_of(VehicleKind k) {
  switch (k) {
    case VehicleKind::car: return {4.5, 1.9};
    case VehicleKind::truck: return {7.0, 2.5};
    case VehicleKind::motorcycle: return {2.2, 0.8};
    case VehicleKind::bicycle: return {1.8, 0.6};
  }
  return {4.5, 1.9};
}

struct LaneChange {
  int target_lane = 0;
  double elapsed = 0.0;

  friend bool operator==(const LaneChange &, const LaneChange &) = default;
};

/// Point mass with a rectangular footprint in road coordinates. Lane 0 is the
/// rightmost lane; lateral position grows to the left.
struct VehicleState {
  int id = 0;
  VehicleKind kind = VehicleKind::car;
  double length = 4.5;
  double width = 1.9;
  int lane_index = 0;
  double lateral_offset = 0.0;
  double longitudinal_pos = 0.0;
  double speed = 0.0;
  std::optional<LaneChange> lane_change;
  int waypoint = -1;  // index of the active behavior waypoint, -1 before start
  /// Lane a commanded lane change is waiting to enter, -1 when none.
  int pending_lane = -1;

  double lateral(double lane_width) const {
    return lane_index * lane_width + lateral_offset;
  }
  double front() const { return longitudinal_pos + 0.5 * length; }
  double rear() const { return longitudinal_pos - 0.5 * length; }

  friend bool operator==(const VehicleState &, const VehicleState &) = default;
};

struct WeatherState {
  double cloudiness = 0.0;              // [0,100]
  double precipitation = 0.0;           // [0,80]
  double precipitation_deposits = 0.0;  // [0,80]
  double wind_intensity = 0.0;          // [0,50]
  double fog_density = 0.0;             // [0,15]
  double fog_distance = 0.0;            // [0,100]
  double wetness = 0.0;                 // [0,40]
  double fog_falloff = 0.0;             // [0,2]
  double sun_azimuth = 0.0;             // degrees [0,360]
  double sun_altitude = 45.0;           // degrees [-90,90]

  friend bool operator==(const WeatherState &, const WeatherState &) = default;
};

inline void validate(const WeatherState &w) {
  auto check = [](std::string_view name, double v, double lo, double hi) {
    if (!(v >= lo && v <= hi)) {
      throw ConfigError(std::string(name) + " = " + std::to_string(v) +
                        " outside [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
    }
  };
  check("cloudiness", w.cloudiness, 0, 100);
  check("precipitation", w.precipitation, 0, 80);
  check("precipitation_deposits", w.precipitation_deposits, 0, 80);
  check("wind_intensity", w.wind_intensity, 0, 50);
  check("fog_density", w.fog_density, 0, 15);
  check("fog_distance", w.fog_distance, 0, 100);
  check("wetness", w.wetness, 0, 40);
  check("fog_falloff", w.fog_falloff, 0, 2);
  check("sun_azimuth", w.sun_azimuth, 0, 360);
  check("sun_altitude", w.sun_altitude, -90, 90);
}

struct CollisionEvent {
  double time = 0.0;
  int npc_id = 0;
  double ego_speed_at_impact = 0.0;
  bool in_lane = true;

  friend bool operator==(const CollisionEvent &, const CollisionEvent &) = default;
};

/// Road geometry the sensors and ground-truth queries need.
struct RoadGeometry {
  int lane_count = 3;
  double lane_width = 3.5;
  double speed_limit = 15.6;
  /// Bends only the sensor field-of-view geometry; physics stays in road
  /// coordinates.
  double curvature = 0.0;

  double lane_half_width() const { return 0.5 * lane_width; }
  friend bool operator==(const RoadGeometry &, const RoadGeometry &) = default;
};

struct WorldState {
  double time = 0.0;
  RoadGeometry road;
  VehicleState ego;
  std::vector<VehicleState> npcs;
  WeatherState weather;
  std::optional<CollisionEvent> collision;

  bool frozen() const { return collision.has_value(); }
};

inline constexpr int kNpcCount = 6;
inline constexpr int kWaypointCount = 5;

struct NpcSlot {
  int lane = 0;
  double position = 0.0;  // center, relative to the ego's start

  friend bool operator==(const NpcSlot &, const NpcSlot &) = default;
};

/// A driving environment: road, ego start, and the fixed NPC start slots the
/// scenario genome animates.
struct Environment {
  std::string id = "s1";
  int lane_count = 3;
  double lane_width = 3.5;
  double speed_limit = 15.6;
  double road_length = 150.0;
  double curvature = 0.0;
  int ego_lane = 1;
  double ego_initial_speed = 0.0;
  double npc_initial_speed = 0.0;
  std::array<NpcSlot, kNpcCount> slots{};
  int model_count = 28;

  RoadGeometry road() const {
    return {lane_count, lane_width, speed_limit, curvature};
  }
  friend bool operator==(const Environment &, const Environment &) = default;
};

/// Straight local road, 35 mph.
inline Environment s1_environment() {
  Environment e;
  e.id = "s1";
  e.speed_limit = 15.6;
  e.road_length = 150.0;
  e.curvature = 0.0;
  e.model_count = 28;
  e.slots = {{{1, 30.0}, {2, 14.0}, {0, 20.0}, {2, 45.0}, {0, 55.0}, {1, 75.0}}};
  return e;
}

/// Left-curved highway, 45 mph, cars and trucks only.
inline Environment s2_environment() {
  Environment e;
  e.id = "s2";
  e.speed_limit = 20.1;
  e.road_length = 200.0;
  e.curvature = 1.0 / 400.0;
  e.model_count = 24;
  e.slots = {{{1, 38.0}, {2, 18.0}, {0, 25.0}, {2, 58.0}, {0, 70.0}, {1, 95.0}}};
  return e;
}

inline Environment environment_by_id(std::string_view id) {
  if (id == "s1") return s1_environment();
  if (id == "s2") return s2_environment();
  throw ConfigError("unknown environment '" + std::string(id) +
                    "' (expected s1 or s2)");
}

/// Blueprint catalog collapsed to vehicle classes.
inline VehicleKind model_kind(int model) {
  if (model < 20) return VehicleKind::car;
  if (model < 24) return VehicleKind::truck;
  if (model < 26) return VehicleKind::motorcycle;
  return VehicleKind::bicycle;
}

}  // namespace fused
