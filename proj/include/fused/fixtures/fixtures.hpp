#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fused/core/errors.hpp"
#include "fused/sim/config.hpp"
#include "fused/sim/scenario.hpp"

namespace fused {

/// A single-actor cut-in on top of a background where every other NPC keeps
/// its lane and drives off at the top speed offset.
struct CutInSpec {
  int actor = 1;  // NPC slot that merges; slot 1 starts left of the ego, slot 2 right
  int model = 0;
  double approach_delta = -40.0;  // speed offset before the merge, percent of the limit
  int cut_waypoint = 1;
  double cut_delta = -40.0;
  double after_delta = -40.0;  // speed offset for waypoints after the merge
  WeatherState weather;
};

inline ScenarioGenome quiet_genome() {
  ScenarioGenome g;
  for (int n = 0; n < kNpcCount; ++n) {
    g[model_index(n)] = 0;
    for (int w = 0; w < kWaypointCount; ++w) {
      g[speed_index(n, w)] = 50.0;
      g[lane_change_index(n, w)] = static_cast<double>(LaneChangeCommand::none);
    }
  }
  set_weather(g, WeatherState{});
  return g;
}

inline ScenarioGenome cut_in_genome(const CutInSpec &c, const Environment &env) {
  if (c.actor < 0 || c.actor >= kNpcCount) throw ConfigError("cut-in actor slot out of range");
  if (c.cut_waypoint < 0 || c.cut_waypoint >= kWaypointCount)
    throw ConfigError("cut-in waypoint out of range");
  const auto &slot = env.slots[static_cast<std::size_t>(c.actor)];
  if (slot.lane == env.ego_lane)
    throw ConfigError("cut-in actor must start outside the ego lane");
  const auto dir = slot.lane > env.ego_lane ? LaneChangeCommand::right : LaneChangeCommand::left;

  ScenarioGenome g = quiet_genome();
  g[model_index(c.actor)] = c.model;
  for (int w = 0; w < kWaypointCount; ++w) {
    double delta = c.approach_delta;
    if (w == c.cut_waypoint) delta = c.cut_delta;
    if (w > c.cut_waypoint) delta = c.after_delta;
    g[speed_index(c.actor, w)] = delta;
    g[lane_change_index(c.actor, w)] =
        static_cast<double>(w == c.cut_waypoint ? dir : LaneChangeCommand::none);
  }
  set_weather(g, c.weather);
  if (!make_bounds(env).contains(g)) throw ConfigError("cut-in scenario lies outside the search space");
  return g;
}

}  // namespace fused

namespace fused {

/// A packaged, hand-authored scenario with the fusion method it targets.
struct Fixture {
  std::string name;
  std::string description;
  ScenarioGenome genome;
  SimConfig config;
  FusionMethod fusion = FusionMethod::default_rule;
  /// Method expected to avoid the collision, when the fixture demonstrates a repair.
  std::optional<FusionMethod> repair;
};

namespace detail {

inline WeatherState heavy_weather() {
  WeatherState w;
  w.fog_density = 15.0;
  w.precipitation = 60.0;
  w.cloudiness = 80.0;
  w.sun_altitude = -20.0;
  return w;
}

inline Fixture make_fixture(std::string name, std::string description, const CutInSpec &c,
                            FusionMethod fusion, std::optional<FusionMethod> repair = {}) {
  Fixture f;
  f.name = std::move(name);
  f.description = std::move(description);
  f.genome = cut_in_genome(c, f.config.env);
  f.fusion = fusion;
  f.repair = repair;
  return f;
}

}  // namespace detail

inline Fixture camera_blind_cutin() {
  CutInSpec c;
  c.actor = 1;
  c.model = 3;
  c.approach_delta = -60.0;
  c.cut_waypoint = 1;
  c.cut_delta = -70.0;
  c.after_delta = -50.0;
  c.weather = detail::heavy_weather();
  return detail::make_fixture(
      "camera_blind_cutin",
      "A slow car merges from the left in fog, rain and darkness. Camera confidence on it "
      "hovers around the gate, so the default rule reports no lead or follows the more "
      "confident car far ahead while the radar tracks the merging car.",
      c, FusionMethod::default_rule);
}

/// Same scene with both sensors switched off: nothing could have seen the merge.
inline Fixture camera_blind_cutin_all_sensors() {
  Fixture f = camera_blind_cutin();
  f.name = "camera_blind_cutin_all_sensors";
  f.description = "The camera-blind merge with the camera and radar both disabled.";
  f.config.noise.camera.dropout = 1.0;
  f.config.noise.radar.detection_probability = {0.0, 0.0, 0.0, 0.0};
  f.config.noise.radar.clutter_rate = 0.0;
  f.config.noise.radar.wetness_clutter_gain = 0.0;
  return f;
}

inline Fixture mismatch_cybertruck() {
  CutInSpec c;
  c.actor = 2;
  c.model = 19;
  c.approach_delta = -80.0;
  c.cut_waypoint = 1;
  c.cut_delta = -90.0;
  c.after_delta = -50.0;
  return detail::make_fixture(
      "mismatch_cybertruck",
      "A large car brakes while merging from the right in clear weather; shows how the "
      "default rule pairs camera and radar leads frame by frame.",
      c, FusionMethod::default_rule);
}

inline Fixture lane_gate_police() {
  CutInSpec c;
  c.actor = 1;
  c.model = 7;
  c.approach_delta = -60.0;
  c.cut_waypoint = 1;
  c.cut_delta = -90.0;
  c.after_delta = -50.0;
  return detail::make_fixture(
      "lane_gate_police",
      "A car cuts in from the left and stops. The tracker ranks only in-lane tracks, so "
      "the merging car is ignored until it is too late; the best sensor avoids it.",
      c, FusionMethod::mathworks);
}

inline Fixture cutin_truck_repair() {
  CutInSpec c;
  c.actor = 1;
  c.model = 20;
  c.approach_delta = -60.0;
  c.cut_waypoint = 1;
  c.cut_delta = -90.0;
  c.after_delta = -50.0;
  return detail::make_fixture(
      "cutin_truck_repair",
      "A truck cuts in from the left. The tracker collides; admitting laterally approaching "
      "tracks avoids the crash.",
      c, FusionMethod::mathworks, FusionMethod::mathworks_plus);
}

inline std::vector<Fixture> all_fixtures() {
  return {camera_blind_cutin(), camera_blind_cutin_all_sensors(), mismatch_cybertruck(),
          lane_gate_police(), cutin_truck_repair()};
}

inline std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto &f : all_fixtures()) out.push_back(f.name);
  return out;
}

inline Fixture fixture_by_name(std::string_view name) {
  for (auto &f : all_fixtures())
    if (f.name == name) return f;
  std::string known;
  for (const auto &n : fixture_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown fixture '" + std::string(name) + "' (known: " + known + ")");
}

/// Clear-weather merges over both side slots, two vehicle sizes, two merge
/// timings and three merge speeds. Not every member collides under every
/// fusion method; callers filter by outcome.
inline std::vector<Fixture> cut_in_suite() {
  std::vector<Fixture> out;
  struct Timing {
    double approach;
    int waypoint;
  };
  for (int actor : {1, 2})
    for (int model : {0, 20})
      for (Timing t : {Timing{-80.0, 1}, Timing{-40.0, 2}})
        for (double cut : {-90.0, -70.0, -50.0}) {
          CutInSpec c;
          c.actor = actor;
          c.model = model;
          c.approach_delta = t.approach;
          c.cut_waypoint = t.waypoint;
          c.cut_delta = cut;
          c.after_delta = -50.0;
          const std::string name = "cutin_a" + std::to_string(actor) + "_m" +
                                   std::to_string(model) + "_w" + std::to_string(t.waypoint) +
                                   "_v" + std::to_string(static_cast<int>(-cut));
          out.push_back(detail::make_fixture(name, "parametric merge", c, FusionMethod::mathworks,
                                             FusionMethod::mathworks_plus));
        }
  return out;
}

}  // namespace fused
