#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "fused/core/errors.hpp"
#include "fused/fuzzer/campaign.hpp"

namespace fused {

using ojson = nlohmann::ordered_json;

inline constexpr const char *kConfigSchema = "fused-config/1";

/// Everything a campaign config file carries.
struct CampaignConfig {
  std::string environment = "s1";
  CampaignSettings settings;
  std::string output_dir = "fused_out";
  int repetitions = 3;  // campaigns per entry in compare

  void validate() const {
    environment_by_id(environment);
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (settings.parallel < 1) throw ConfigError("parallel must be >= 1");
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
    settings.validate();
  }

  friend bool operator==(const CampaignConfig &, const CampaignConfig &) = default;
};

inline CampaignConfig default_campaign_config() { return {}; }

// Each describe() lists the serialized fields of one struct. Readers and
// writers both walk these lists, so load and save cannot drift apart.

template <class IO> void describe(IO &io, GAConfig &g) {
  io("population", g.population);
  io("generations", g.generations);
  io("crossover_eta", g.crossover_eta);
  io("crossover_prob", g.crossover_prob);
  io("mutation_eta", g.mutation_eta);
  io("mutation_rate", g.mutation_rate);
  io("seed", g.rng_seed);
}

template <class IO> void describe(IO &io, ControllerParams &c) {
  io("d_min", c.d_min);
  io("headway", c.headway);
  io("max_accel", c.max_accel);
  io("max_brake", c.max_brake);
  io("k_speed", c.k_speed);
  io("k_gap", c.k_gap);
  io("k_closing", c.k_closing);
}

template <class IO> void describe(IO &io, NpcParams &n) {
  io("max_accel", n.max_accel);
  io("max_brake", n.max_brake);
  io("emergency_brake", n.emergency_brake);
  io("k_speed", n.k_speed);
  io("standstill_gap", n.standstill_gap);
  io("headway", n.headway);
  io("k_gap", n.k_gap);
  io("k_closing", n.k_closing);
  io("follow_range", n.follow_range);
  io("lane_change_duration", n.lane_change_duration);
  io("merge_gap_behind", n.merge_gap_behind);
  io("merge_time_behind", n.merge_time_behind);
  io("merge_gap_ahead", n.merge_gap_ahead);
  io("merge_time_ahead", n.merge_time_ahead);
}

template <class IO> void describe(IO &io, CameraNoise &c) {
  io("sigma_x", c.sigma_x);
  io("sigma_y", c.sigma_y);
  io("sigma_v", c.sigma_v);
  io("sigma_confidence", c.sigma_confidence);
  io("base_confidence", c.base_confidence);
  io("range", c.range);
  io("half_fov_deg", c.half_fov_deg);
  io("detectability", c.detectability);
  io("fog_penalty", c.fog_penalty);
  io("precipitation_penalty", c.precipitation_penalty);
  io("cloudiness_penalty", c.cloudiness_penalty);
  io("darkness_threshold", c.darkness_threshold);
  io("darkness_penalty", c.darkness_penalty);
  io("path_floor", c.path_floor);
  io("range_onset", c.range_onset);
  io("range_penalty", c.range_penalty);
  io("dropout", c.dropout);
  io("sigma_range_gain", c.sigma_range_gain);
  io("fog_noise_gain", c.fog_noise_gain);
  io("precipitation_noise_gain", c.precipitation_noise_gain);
  io("darkness_noise_gain", c.darkness_noise_gain);
  io("fog_range_bias", c.fog_range_bias);
}

template <class IO> void describe(IO &io, RadarNoise &r) {
  io("sigma_x", r.sigma_x);
  io("sigma_y", r.sigma_y);
  io("sigma_v", r.sigma_v);
  io("return_scatter", r.return_scatter);
  io("returns_per_target", r.returns_per_target);
  io("clutter_rate", r.clutter_rate);
  io("wetness_clutter_gain", r.wetness_clutter_gain);
  io("clutter_range", r.clutter_range);
  io("range", r.range);
  io("half_fov_deg", r.half_fov_deg);
  io("detection_probability", r.detection_probability);
  io("dbscan_eps", r.dbscan_eps);
  io("dbscan_min_samples", r.dbscan_min_samples);
}

template <class IO> void describe(IO &io, SensorNoiseModel &n) {
  io("camera", n.camera);
  io("radar", n.radar);
}

template <class IO> void describe(IO &io, DefaultFusionParams &p) {
  io("low_speed", p.low_speed);
  io("close_distance", p.close_distance);
  io("min_confidence", p.min_confidence);
  io("match_base", p.match_base);
  io("match_gain", p.match_gain);
  io("match_speed", p.match_speed);
}

template <class IO> void describe(IO &io, ProcessNoise &q) {
  io("q_x", q.q_x);
  io("q_y", q.q_y);
  io("q_v", q.q_v);
}

template <class IO> void describe(IO &io, TrackerParams &t) {
  io("dt", t.dt);
  io("stationary_speed", t.stationary_speed);
  io("association_gate", t.association_gate);
  io("max_missed", t.max_missed);
  io("min_camera_confidence", t.min_camera_confidence);
  io("lateral_approach_eps", t.lateral_approach_eps);
  io("camera_variance", t.camera_variance);
  io("radar_variance", t.radar_variance);
  io("process", t.process);
}

template <class IO> void describe(IO &io, ObjectiveWeights &w) {
  io("c_failure", w.c_failure);
  io("c_d", w.c_d);
  io("c_fusion", w.c_fusion);
}

template <class IO> void describe(IO &io, DistThresholds &t) {
  io("th_x", t.th_x);
  io("th_y", t.th_y);
  io("th_v", t.th_v);
}

template <class IO> void describe(IO &io, FaultConfig &f) {
  io("th", f.th);
  io("th_err", f.th_err);
  io("pre_crash_m", f.pre_crash_m);
}

template <class IO> void describe(IO &io, CoverageParams &c) {
  io("s", c.s);
  io("l", c.l);
  io("v_max", c.v_max);
  io("sample_hz", c.sample_hz);
}

template <class IO> void describe(IO &io, WeatherState &w) {
  io("cloudiness", w.cloudiness);
  io("precipitation", w.precipitation);
  io("precipitation_deposits", w.precipitation_deposits);
  io("wind_intensity", w.wind_intensity);
  io("fog_density", w.fog_density);
  io("fog_distance", w.fog_distance);
  io("wetness", w.wetness);
  io("fog_falloff", w.fog_falloff);
  io("sun_azimuth", w.sun_azimuth);
  io("sun_altitude", w.sun_altitude);
}

namespace detail {


/// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_col(const std::string &text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

/// Best-effort line of a dotted field path in the source text: walks the
/// path components in order, each searched after the previous one.
inline std::optional<std::size_t> line_of_path(const std::string &text, const std::string &path) {
  std::size_t pos = 0;
  std::stringstream ss(path);
  std::string part;
  bool any = false;
  while (std::getline(ss, part, '.')) {
    const auto br = part.find('[');
    if (br != std::string::npos) part = part.substr(0, br);
    if (part.empty()) continue;
    const auto at = text.find("\"" + part + "\"", pos);
    if (at == std::string::npos) return std::nullopt;
    pos = at;
    any = true;
  }
  if (!any) return std::nullopt;
  return line_col(text, pos).first;
}

class JsonReader {
 public:
  JsonReader(const ojson &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  template <class T> void operator()(const char *key, T &value) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    read(j_.at(key), value, child(key));
  }

  void expect_only_known() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(child(it.key()) + ": unknown field");
  }

  std::string child(const std::string &key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  [[noreturn]] void fail(const std::string &msg) const {
    throw ConfigError((path_.empty() ? std::string("config") : path_) + ": " + msg);
  }

  template <class T> static void read(const ojson &v, T &out, const std::string &path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(path + ": expected a boolean");
      out = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned()) {
          out = v.get<T>();
        } else {
          if (v.get<std::int64_t>() < 0) throw ConfigError(path + ": must be >= 0");
          out = static_cast<T>(v.get<std::int64_t>());
        }
      } else {
        out = v.get<T>();
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(path + ": expected a number");
      out = v.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(path + ": expected a string");
      out = v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::array<double, 4>>) {
      if (!v.is_array() || v.size() != 4)
        throw ConfigError(path + ": expected an array of 4 numbers");
      for (std::size_t i = 0; i < 4; ++i) read(v[i], out[i], path + "[" + std::to_string(i) + "]");
    } else if constexpr (std::is_same_v<T, Eigen::Vector3d>) {
      if (!v.is_array() || v.size() != 3)
        throw ConfigError(path + ": expected an array of 3 numbers");
      for (Eigen::Index i = 0; i < 3; ++i)
        read(v[static_cast<std::size_t>(i)], out(i), path + "[" + std::to_string(i) + "]");
    } else {
      JsonReader sub(v, path);
      describe(sub, out);
      sub.expect_only_known();
    }
  }

  const ojson &j_;
  std::string path_;
  std::set<std::string> seen_;
};

class JsonWriter {
 public:
  explicit JsonWriter(ojson &j) : j_(j) { j_ = ojson::object(); }

  template <class T> void operator()(const char *key, T &value) {
    if constexpr (std::is_arithmetic_v<T> || std::is_same_v<T, std::string>) {
      j_[key] = value;
    } else if constexpr (std::is_same_v<T, std::array<double, 4>>) {
      j_[key] = ojson::array();
      for (double d : value) j_[key].push_back(d);
    } else if constexpr (std::is_same_v<T, Eigen::Vector3d>) {
      j_[key] = ojson::array({value(0), value(1), value(2)});
    } else {
      ojson sub;
      JsonWriter w(sub);
      describe(w, value);
      j_[key] = std::move(sub);
    }
  }

 private:
  ojson &j_;
};

}  // namespace detail

/// Reads any described struct from a JSON object, rejecting unknown keys.
template <class T> void from_json_object(const ojson &j, T &out, const std::string &path = "") {
  detail::JsonReader r(j, path);
  describe(r, out);
  r.expect_only_known();
}

template <class T> ojson to_json_object(const T &value) {
  ojson j;
  detail::JsonWriter w(j);
  T copy = value;
  describe(w, copy);
  return j;
}

inline ojson config_to_json(const CampaignConfig &c) {
  const auto &s = c.settings;
  ojson j;
  j["schema"] = kConfigSchema;
  j["environment"] = c.environment;
  j["fusion"] = std::string(to_string(s.fusion));
  j["algorithm"] = std::string(to_string(s.ga.algorithm));
  j["output_dir"] = c.output_dir;
  j["parallel"] = s.parallel;
  j["repetitions"] = c.repetitions;
  j["ga"] = to_json_object(s.ga);
  j["sim"] = {{"physics_dt", s.sim.physics_dt},   {"control_hz", s.sim.control_hz},
              {"horizon", s.sim.horizon},         {"warmup", s.sim.warmup},
              {"rng_seed", s.sim.rng_seed},       {"sensing_horizon", s.sim.sensing_horizon}};
  j["controller"] = to_json_object(s.sim.controller);
  j["npc"] = to_json_object(s.sim.npc);
  j["default_fusion"] = to_json_object(s.sim.default_fusion);
  j["tracker"] = to_json_object(s.sim.tracker);
  j["objectives"] = {{"weights", to_json_object(s.weights)},
                     {"thresholds", to_json_object(s.thresholds)},
                     {"fault", to_json_object(s.fault)},
                     {"distance_cap", s.distance_cap}};
  j["coverage"] = to_json_object(s.coverage);
  j["noise"] = to_json_object(s.sim.noise);
  if (s.fixed_weather) j["weather"] = to_json_object(*s.fixed_weather);
  return j;
}

namespace detail {

inline void read_config_json(const ojson &j, CampaignConfig &c) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  static const std::set<std::string> known{
      "schema", "environment", "fusion",     "algorithm",      "output_dir", "parallel",
      "repetitions", "ga",     "sim",        "controller",     "npc",        "default_fusion",
      "tracker", "objectives", "coverage",   "noise",          "weather"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError(it.key() + ": unknown field");

  auto str = [&](const char *key, std::string &out) {
    if (!j.contains(key)) return;
    if (!j[key].is_string()) throw ConfigError(std::string(key) + ": expected a string");
    out = j[key].get<std::string>();
  };
  std::string schema = kConfigSchema;
  str("schema", schema);
  if (schema != kConfigSchema)
    throw ConfigError("schema: unsupported version '" + schema + "' (expected " + kConfigSchema + ")");

  auto &s = c.settings;
  str("environment", c.environment);
  s.sim.env = environment_by_id(c.environment);
  if (j.contains("fusion")) {
    std::string f;
    str("fusion", f);
    try {
      s.fusion = parse_fusion_method(f);
    } catch (const ConfigError &e) {
      throw ConfigError(std::string("fusion: ") + e.what());
    }
  }
  if (j.contains("algorithm")) {
    std::string a;
    str("algorithm", a);
    try {
      s.ga.algorithm = parse_algorithm(a);
    } catch (const ConfigError &e) {
      throw ConfigError(std::string("algorithm: ") + e.what());
    }
  }
  str("output_dir", c.output_dir);

  JsonReader top(j, "");
  top("parallel", s.parallel);
  top("repetitions", c.repetitions);
  if (j.contains("ga")) from_json_object(j["ga"], s.ga, "ga");
  if (j.contains("sim")) {
    JsonReader r(j["sim"], "sim");
    r("physics_dt", s.sim.physics_dt);
    r("control_hz", s.sim.control_hz);
    r("horizon", s.sim.horizon);
    r("warmup", s.sim.warmup);
    r("rng_seed", s.sim.rng_seed);
    r("sensing_horizon", s.sim.sensing_horizon);
    r.expect_only_known();
  }
  if (j.contains("controller")) from_json_object(j["controller"], s.sim.controller, "controller");
  if (j.contains("npc")) from_json_object(j["npc"], s.sim.npc, "npc");
  if (j.contains("default_fusion"))
    from_json_object(j["default_fusion"], s.sim.default_fusion, "default_fusion");
  if (j.contains("tracker")) from_json_object(j["tracker"], s.sim.tracker, "tracker");
  if (j.contains("objectives")) {
    JsonReader r(j["objectives"], "objectives");
    r("weights", s.weights);
    r("thresholds", s.thresholds);
    r("fault", s.fault);
    r("distance_cap", s.distance_cap);
    r.expect_only_known();
  }
  s.sim.oracle_thresholds = s.thresholds;
  if (j.contains("coverage")) from_json_object(j["coverage"], s.coverage, "coverage");
  if (j.contains("noise")) from_json_object(j["noise"], s.sim.noise, "noise");
  if (j.contains("weather")) {
    WeatherState w;
    from_json_object(j["weather"], w, "weather");
    s.fixed_weather = w;
  }
}

}  // namespace detail

/// Parses and validates a config document. Errors carry `source:line:` when
/// the offending location can be found in the text.
inline CampaignConfig parse_config(const std::string &text, const std::string &source = "config") {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::parse_error &e) {
    const auto [line, col] = detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": parse error: " + e.what());
  }
  CampaignConfig c;
  try {
    detail::read_config_json(j, c);
    c.validate();
  } catch (const ConfigError &e) {
    const std::string msg = e.what();
    const std::string field = msg.substr(0, msg.find_first_of(": "));
    std::string where = source;
    if (const auto line = detail::line_of_path(text, field)) where += ":" + std::to_string(*line);
    throw ConfigError(where + ": " + msg);
  }
  return c;
}

inline std::string read_text_file(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline CampaignConfig load_config(const std::filesystem::path &p) {
  return parse_config(read_text_file(p), p.string());
}

inline std::string dump_config(const CampaignConfig &c) { return config_to_json(c).dump(2) + "\n"; }

inline void save_config(const CampaignConfig &c, const std::filesystem::path &p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << dump_config(c);
  if (!out) throw IoError("write failed for " + p.string());
}

}  // namespace fused
