#pragma once

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fused/io/config.hpp"

namespace fused {

inline constexpr const char *kResultSchema = "fused-result/1";
inline constexpr const char *kTraceSchema = "fused-trace/1";
inline constexpr const char *kOutputDirEnv = "FUSED_OUT";

// ---------------------------------------------------------------- output dirs

/// Output directory precedence: explicit flag, then FUSED_OUT, then the
/// config file's output_dir.
inline std::filesystem::path resolve_output_dir(const std::optional<std::string> &flag,
                                                const std::string &from_config) {
  if (flag && !flag->empty()) return *flag;
  if (const char *env = std::getenv(kOutputDirEnv); env && *env) return env;
  return from_config;
}

/// Creates `dir`, refusing to touch an existing non-empty directory unless
/// `overwrite` is set, in which case its contents are removed first.
inline void prepare_output_dir(const std::filesystem::path &dir, bool overwrite) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::exists(dir, ec)) {
    if (!fs::is_directory(dir, ec)) throw IoError(dir.string() + " exists and is not a directory");
    if (!fs::is_empty(dir, ec)) {
      if (!overwrite)
        throw IoError("output directory " + dir.string() +
                      " is not empty; pass --overwrite to replace it");
      fs::remove_all(dir, ec);
      if (ec) throw IoError("cannot clear " + dir.string() + ": " + ec.message());
    }
  }
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

inline void write_text_file(const std::filesystem::path &p, const std::string &text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + p.string());
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  auto [end, ec] = std::to_chars(buf, buf + 16, v, 16);
  std::string s(buf, end);
  return std::string(16 - s.size(), '0') + s;
}

inline std::uint64_t parse_hex64(const std::string &s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ConfigError("malformed digest '" + s + "'");
  return v;
}

// -------------------------------------------------------------------- traces

namespace detail {

inline ojson lead_json(const MaybeLead &l) {
  if (!l) return nullptr;
  ojson a = ojson::array({l->rel_x, l->rel_y, l->rel_v});
  a.push_back(l->confidence ? ojson(*l->confidence) : ojson(nullptr));
  return a;
}

inline MaybeLead lead_from(const ojson &j) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 4) throw ConfigError("lead must be a 4-element array");
  Lead l{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), std::nullopt};
  if (!j[3].is_null()) l.confidence = j[3].get<double>();
  return l;
}

inline ojson npc_json(const VehicleState &v) {
  return ojson::array({v.id, static_cast<int>(v.kind), v.length, v.width, v.lane_index,
                       v.lateral_offset, v.longitudinal_pos, v.speed,
                       v.lane_change ? ojson(v.lane_change->target_lane) : ojson(nullptr),
                       v.lane_change ? ojson(v.lane_change->elapsed) : ojson(nullptr), v.waypoint,
                       v.pending_lane});
}

inline VehicleState npc_from(const ojson &j) {
  if (!j.is_array() || j.size() != 12) throw ConfigError("npc must be a 12-element array");
  VehicleState v;
  v.id = j[0].get<int>();
  v.kind = static_cast<VehicleKind>(j[1].get<int>());
  v.length = j[2].get<double>();
  v.width = j[3].get<double>();
  v.lane_index = j[4].get<int>();
  v.lateral_offset = j[5].get<double>();
  v.longitudinal_pos = j[6].get<double>();
  v.speed = j[7].get<double>();
  if (!j[8].is_null()) v.lane_change = LaneChange{j[8].get<int>(), j[9].get<double>()};
  v.waypoint = j[10].get<int>();
  v.pending_lane = j[11].get<int>();
  return v;
}

inline ojson genome_json(const ScenarioGenome &g) {
  ojson a = ojson::array();
  for (double d : g.values) a.push_back(d);
  return a;
}

inline ScenarioGenome genome_from(const ojson &j) {
  if (!j.is_array() || j.size() != kGenomeSize)
    throw ConfigError("genome must have " + std::to_string(kGenomeSize) + " entries");
  ScenarioGenome g;
  for (std::size_t i = 0; i < kGenomeSize; ++i) g[i] = j[i].get<double>();
  return g;
}

inline ojson collision_json(const std::optional<CollisionEvent> &c) {
  if (!c) return nullptr;
  return {{"time", c->time},
          {"npc_id", c->npc_id},
          {"ego_speed", c->ego_speed_at_impact},
          {"in_lane", c->in_lane}};
}

inline std::optional<CollisionEvent> collision_from(const ojson &j) {
  if (j.is_null()) return std::nullopt;
  return CollisionEvent{j.at("time").get<double>(), j.at("npc_id").get<int>(),
                        j.at("ego_speed").get<double>(), j.at("in_lane").get<bool>()};
}

}  // namespace detail

/// Line-delimited trace: one header record, then one record per frame with
/// the field order time, tick, ego, camera, radar, fusion, fusion_secondary,
/// decision, overridden, ground_truth, accel, npcs.
inline std::string trace_to_jsonl(const SimulationTrace &t) {
  using namespace detail;
  ojson h;
  h["schema"] = kTraceSchema;
  h["fusion"] = std::string(to_string(t.fusion_method));
  if (t.override_window)
    h["override"] = {{"t_start", t.override_window->t_start},
                     {"t_end", t.override_window->t_end},
                     {"method", std::string(to_string(t.override_window->method))}};
  else
    h["override"] = nullptr;
  h["collision"] = collision_json(t.collision);
  h["frames"] = t.frames.size();
  h["lead_fields"] = {"rel_x", "rel_y", "rel_v", "confidence"};
  h["npc_fields"] = {"id",        "kind",           "length",    "width",
                     "lane",      "lateral_offset", "position",  "speed",
                     "lc_target", "lc_elapsed",     "waypoint",  "pending_lane"};
  h["scenario"] = genome_json(t.scenario);
  std::string out = h.dump() + "\n";
  for (const auto &f : t.frames) {
    ojson r;
    r["time"] = f.time;
    r["tick"] = f.tick;
    r["ego"] = {f.ego_pos, f.ego_speed};
    r["camera"] = ojson::array();
    for (const auto &l : f.camera_leads) r["camera"].push_back(lead_json(l));
    r["radar"] = ojson::array();
    for (const auto &l : f.radar_leads) r["radar"].push_back(lead_json(l));
    r["fusion"] = lead_json(f.fusion_out);
    r["fusion_secondary"] = lead_json(f.fusion_secondary);
    r["decision"] = std::string(to_string(f.decision));
    r["overridden"] = f.overridden;
    r["ground_truth"] = lead_json(f.ground_truth);
    r["accel"] = f.accel_cmd;
    r["npcs"] = ojson::array();
    for (const auto &v : f.npcs) r["npcs"].push_back(npc_json(v));
    out += r.dump() + "\n";
  }
  return out;
}

/// Rebuilds a trace from its line-delimited form. The config is not part of
/// the trace file and must come from the results log that references it.
inline SimulationTrace trace_from_jsonl(const std::string &text, const SimConfig &cfg,
                                        const std::string &source = "trace") {
  using namespace detail;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  SimulationTrace t;
  t.config = cfg;
  std::size_t expected = 0;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const ojson j = ojson::parse(line);
      if (lineno == 1) {
        if (j.value("schema", "") != kTraceSchema)
          throw ConfigError("unsupported trace schema (expected " + std::string(kTraceSchema) + ")");
        t.fusion_method = parse_fusion_method(j.at("fusion").get<std::string>());
        if (!j.at("override").is_null()) {
          const auto &o = j["override"];
          t.override_window = OverrideWindow{o.at("t_start").get<double>(),
                                             o.at("t_end").get<double>(),
                                             parse_fusion_method(o.at("method").get<std::string>())};
        }
        t.collision = collision_from(j.at("collision"));
        t.scenario = genome_from(j.at("scenario"));
        expected = j.at("frames").get<std::size_t>();
        continue;
      }
      TraceFrame f;
      f.time = j.at("time").get<double>();
      f.tick = j.at("tick").get<int>();
      f.ego_pos = j.at("ego")[0].get<double>();
      f.ego_speed = j.at("ego")[1].get<double>();
      for (const auto &l : j.at("camera")) f.camera_leads.push_back(*lead_from(l));
      for (const auto &l : j.at("radar")) f.radar_leads.push_back(*lead_from(l));
      f.fusion_out = lead_from(j.at("fusion"));
      f.fusion_secondary = lead_from(j.at("fusion_secondary"));
      f.decision = parse_fusion_decision(j.at("decision").get<std::string>());
      f.overridden = j.at("overridden").get<bool>();
      f.ground_truth = lead_from(j.at("ground_truth"));
      f.accel_cmd = j.at("accel").get<double>();
      for (const auto &v : j.at("npcs")) f.npcs.push_back(npc_from(v));
      t.frames.push_back(std::move(f));
    }
  } catch (const ConfigError &e) {
    throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
  } catch (const ojson::exception &e) {
    throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
  }
  if (lineno == 0) throw ConfigError(source + ": empty trace file");
  if (t.frames.size() != expected)
    throw ConfigError(source + ": header announces " + std::to_string(expected) +
                      " frames, found " + std::to_string(t.frames.size()));
  return t;
}

inline void write_trace(const std::filesystem::path &p, const SimulationTrace &t) {
  write_text_file(p, trace_to_jsonl(t));
}

inline SimulationTrace read_trace(const std::filesystem::path &p, const SimConfig &cfg) {
  if (!std::filesystem::exists(p)) throw IoError("missing trace file " + p.string());
  return trace_from_jsonl(read_text_file(p), cfg, p.string());
}

// --------------------------------------------------------------- results log

inline std::string trace_file_name(int evaluation_id) {
  std::string n = std::to_string(evaluation_id);
  return "traces/" + std::string(n.size() < 6 ? 6 - n.size() : 0, '0') + n + ".jsonl";
}

inline ojson result_header_json(const CampaignConfig &c) {
  ojson h;
  h["schema"] = kResultSchema;
  h["kind"] = "header";
  h["config"] = config_to_json(c);
  return h;
}

inline ojson result_json(const EvaluationResult &r) {
  ojson j;
  j["schema"] = kResultSchema;
  j["kind"] = "evaluation";
  j["id"] = r.id;
  j["generation"] = r.generation;
  j["index"] = r.index;
  j["collided"] = r.collided;
  j["collision_time"] = r.collision_time ? ojson(*r.collision_time) : ojson(nullptr);
  j["f_failure"] = r.objectives.f_failure;
  j["f_d"] = r.objectives.f_d;
  j["f_fusion"] = r.objectives.f_fusion;
  j["fitness"] = r.objectives.fitness;
  j["digest"] = hex64(r.digest);
  j["trace"] = r.collided ? ojson(trace_file_name(r.id)) : ojson(nullptr);
  j["genome"] = detail::genome_json(r.genome);
  return j;
}

inline EvaluationResult result_from_json(const ojson &j) {
  EvaluationResult r;
  r.id = j.at("id").get<int>();
  r.generation = j.at("generation").get<int>();
  r.index = j.at("index").get<int>();
  r.collided = j.at("collided").get<bool>();
  if (!j.at("collision_time").is_null()) r.collision_time = j["collision_time"].get<double>();
  r.objectives.f_failure = j.at("f_failure").get<double>();
  r.objectives.f_d = j.at("f_d").get<double>();
  r.objectives.f_fusion = j.at("f_fusion").get<double>();
  r.objectives.fitness = j.at("fitness").get<double>();
  r.digest = parse_hex64(j.at("digest").get<std::string>());
  r.genome = detail::genome_from(j.at("genome"));
  return r;
}

/// Append-only writer for a campaign directory: results.jsonl plus one trace
/// file per collision.
class ResultStore {
 public:
  ResultStore(std::filesystem::path dir, const CampaignConfig &config)
      : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_ / "traces");
    save_config(config, dir_ / "config.json");
    log_.open(dir_ / "results.jsonl", std::ios::binary | std::ios::trunc);
    if (!log_) throw IoError("cannot open " + (dir_ / "results.jsonl").string());
    log_ << result_header_json(config).dump() << "\n";
    flush();
  }

  void append(const EvaluationResult &r) {
    log_ << result_json(r).dump() << "\n";
    if (r.collided) {
      if (!r.trace) throw IoError("collision result " + std::to_string(r.id) + " has no trace");
      write_trace(dir_ / trace_file_name(r.id), *r.trace);
    }
  }

  void flush() {
    log_.flush();
    if (!log_) throw IoError("write failed for " + (dir_ / "results.jsonl").string());
  }

  const std::filesystem::path &dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::ofstream log_;
};

struct ResultLog {
  CampaignConfig config;
  std::vector<EvaluationResult> results;
};

/// Parses results.jsonl. Collision records are attached to their traces
/// only when `load_traces` is set; a missing trace file is an IoError.
inline ResultLog read_results_log(const std::filesystem::path &p, bool load_traces = true) {
  if (!std::filesystem::exists(p)) throw IoError("missing results log " + p.string());
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  ResultLog log;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = p.string() + ":" + std::to_string(lineno);
    ojson j;
    try {
      j = ojson::parse(line);
    } catch (const ojson::parse_error &e) {
      throw ConfigError(where + ": " + e.what());
    }
    if (j.value("schema", "") != kResultSchema)
      throw ConfigError(where + ": unsupported results schema (expected " +
                        std::string(kResultSchema) + ")");
    const std::string kind = j.value("kind", "");
    if (kind == "header") {
      log.config = parse_config(j.at("config").dump(), where);
      header = true;
      continue;
    }
    if (kind != "evaluation") throw ConfigError(where + ": unknown record kind '" + kind + "'");
    if (!header) throw ConfigError(where + ": evaluation record before header");
    try {
      log.results.push_back(result_from_json(j));
    } catch (const ojson::exception &e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  if (!header) throw ConfigError(p.string() + ": no header record");
  if (load_traces) {
    const auto dir = p.parent_path();
    for (auto &r : log.results)
      if (r.collided)
        r.trace = std::make_shared<SimulationTrace>(
            read_trace(dir / trace_file_name(r.id), log.config.settings.sim));
  }
  return log;
}

}  // namespace fused
