#pragma once

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fused/analyzer/report.hpp"
#include "fused/fixtures/fixtures.hpp"
#include "fused/io/config.hpp"
#include "fused/io/report_csv.hpp"
#include "fused/io/store.hpp"

namespace fused::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kDeterminismError = 3,
  kSimulationError = 4,
  kIoError = 5,
};

/// Maps an in-flight exception to its exit category.
inline int exit_code_for(const std::exception &e) {
  if (dynamic_cast<const ConfigError *>(&e) || dynamic_cast<const DecodeError *>(&e))
    return kConfigError;
  if (dynamic_cast<const DeterminismError *>(&e)) return kDeterminismError;
  if (dynamic_cast<const IoError *>(&e)) return kIoError;
  if (dynamic_cast<const std::filesystem::filesystem_error *>(&e)) return kIoError;
  return kSimulationError;
}

/// Flags shared by the commands; unset optionals leave the config alone.
struct CommonOptions {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> parallel;
  std::optional<double> pre_crash_m;
  std::optional<std::string> fusion;
  std::optional<std::string> algorithm;
  bool overwrite = false;
};

inline void apply_overrides(CampaignConfig &c, const CommonOptions &o) {
  if (o.seed) c.settings.ga.rng_seed = *o.seed;
  if (o.parallel) c.settings.parallel = *o.parallel;
  if (o.fusion) c.settings.fusion = parse_fusion_method(*o.fusion);
  if (o.algorithm) c.settings.ga.algorithm = parse_algorithm(*o.algorithm);
  if (o.pre_crash_m) c.settings.fault.pre_crash_m = *o.pre_crash_m;
  c.validate();
}

/// Runs one campaign into `dir` (which must already be prepared), printing a
/// line per generation. A simulation failure leaves failure.json behind.
inline CampaignState run_campaign_to_dir(const CampaignConfig &c, const std::filesystem::path &dir,
                                         std::ostream &log) {
  ResultStore store(dir, c);
  std::size_t written = 0;
  try {
    return run_campaign(c.settings, [&](const CampaignState &st) {
      int coll = 0;
      double best = std::numeric_limits<double>::infinity();
      for (const auto &r : st.population) {
        coll += r.collided;
        best = std::min(best, r.objectives.fitness);
      }
      for (; written < st.results.size(); ++written) store.append(st.results[written]);
      store.flush();
      log << "generation " << st.generation << ": evaluations " << st.results.size()
          << ", collisions " << coll << " (archive " << st.archive.size() << "), best fitness "
          << fmt_num(best) << "\n";
    });
  } catch (const EvaluationFailure &e) {
    ojson f;
    f["evaluation_id"] = e.evaluation_id;
    f["message"] = e.what();
    f["genome"] = detail::genome_json(e.genome);
    write_text_file(dir / "failure.json", f.dump(2) + "\n");
    store.flush();
    throw;
  }
}

inline int cmd_fuzz(const std::string &config_path, const CommonOptions &o, std::ostream &log) {
  CampaignConfig c = load_config(config_path);
  apply_overrides(c, o);
  const auto dir = resolve_output_dir(o.out, c.output_dir);
  prepare_output_dir(dir, o.overwrite);
  log << "fuzz: " << to_string(c.settings.ga.algorithm) << " against "
      << to_string(c.settings.fusion) << ", " << c.settings.ga.generations << " x "
      << c.settings.ga.population << " on " << c.environment << " -> " << dir.string() << "\n";
  run_campaign_to_dir(c, dir, log);
  log << "results: " << (dir / "results.jsonl").string() << "\n";
  return kOk;
}

/// Resolves a campaign directory or a results.jsonl path to the log file.
inline std::filesystem::path results_log_path(const std::filesystem::path &p) {
  if (std::filesystem::is_directory(p)) return p / "results.jsonl";
  return p;
}

struct AnalyzeOutcome {
  CampaignReport report;
  std::filesystem::path report_dir;
};

inline AnalyzeOutcome analyze_log(const ResultLog &log, double m, FusionMethod replacement,
                                  unsigned parallel, int sanity_n) {
  AnalyzeOutcome out;
  const auto &s = log.config.settings;
  out.report = analyze_results(log.results, s, m, replacement, parallel);
  if (sanity_n > 0)
    out.report.sanity = sanity_replay(log.results, sanity_n, s, s.ga.rng_seed, parallel);
  return out;
}

inline void print_report_summary(const CampaignReport &r, std::ostream &log) {
  log << "collisions " << r.collisions() << ", fusion errors " << r.fusion_errors()
      << ", distinct fusion errors " << r.distinct_fusion_errors() << "\n";
  for (const auto &k : r.ks)
    log << "KS " << kGroupNames[static_cast<std::size_t>(k.a)] << " vs "
        << kGroupNames[static_cast<std::size_t>(k.b)] << ": "
        << (k.statistic ? fmt_num(*k.statistic) : std::string("n/a")) << "\n";
  if (r.sanity)
    log << "sanity: collision " << r.sanity->collision_bit_exact << "/"
        << r.sanity->collision_selected << " bit-exact, no-collision "
        << r.sanity->clean_bit_exact << "/" << r.sanity->clean_selected << " bit-exact\n";
}

inline int cmd_analyze(const std::string &results_path, const CommonOptions &o, int sanity_n,
                       std::ostream &log) {
  const auto log_path = results_log_path(results_path);
  ResultLog rl = read_results_log(log_path);
  const double m = o.pre_crash_m.value_or(rl.config.settings.fault.pre_crash_m);
  if (!(m > 0)) throw ConfigError("pre-crash-m must be > 0");
  const FusionMethod replacement =
      o.fusion ? parse_fusion_method(*o.fusion) : FusionMethod::best_sensor;
  const unsigned parallel = o.parallel.value_or(rl.config.settings.parallel);
  std::ostringstream m_name;
  m_name << "report_m" << m;
  const auto dir = resolve_output_dir(o.out, (log_path.parent_path() / m_name.str()).string());
  prepare_output_dir(dir, o.overwrite);
  auto outcome = analyze_log(rl, m, replacement, parallel, sanity_n);
  write_report(dir, outcome.report);
  log << "analyze: " << rl.results.size() << " evaluations, window " << m << " s, replacement "
      << to_string(replacement) << " -> " << dir.string() << "\n";
  print_report_summary(outcome.report, log);
  return kOk;
}

inline std::string compare_label(const std::filesystem::path &config_path, const CampaignConfig &c,
                                 bool expanded) {
  std::string label = config_path.stem().string();
  if (expanded)
    label += "_" + std::string(to_string(c.settings.ga.algorithm)) + "_" +
             std::string(to_string(c.settings.fusion));
  return label;
}

/// Everything except algorithm, fusion, seed, parallelism and output location must match.
inline void check_comparable(const CampaignConfig &a, const CampaignConfig &b) {
  auto strip = [](CampaignConfig c) {
    c.settings.ga.algorithm = Algorithm::ga_fusion;
    c.settings.fusion = FusionMethod::default_rule;
    c.settings.ga.rng_seed = 0;
    c.settings.parallel = 1;
    c.output_dir = "-";
    return c;
  };
  if (!(strip(a) == strip(b)))
    throw ConfigError("compare: configs may differ only in algorithm and fusion method");
}

struct CompareEntry {
  std::filesystem::path config_path;
  CampaignConfig config;
  std::string label;
};

/// Runs each entry `repetitions` times with seeds seed, seed+1, ... and
/// writes one campaign directory per run plus comparison tables.
inline int cmd_compare(const std::vector<std::string> &config_paths,
                       const std::vector<std::string> &algorithms, const CommonOptions &o,
                       std::ostream &log) {
  if (config_paths.empty()) throw ConfigError("compare: at least one --config is required");
  std::vector<CompareEntry> entries;
  for (const auto &p : config_paths) {
    CampaignConfig base = load_config(p);
    CommonOptions base_opts = o;
    base_opts.algorithm.reset();
    apply_overrides(base, base_opts);
    if (algorithms.empty()) {
      entries.push_back({p, base, compare_label(p, base, false)});
    } else {
      for (const auto &a : algorithms) {
        CampaignConfig c = base;
        c.settings.ga.algorithm = parse_algorithm(a);
        entries.push_back({p, c, compare_label(p, c, true)});
      }
    }
  }
  if (entries.size() < 2) throw ConfigError("compare: need at least two campaign variants");
  for (std::size_t i = 1; i < entries.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (entries[i].label == entries[k].label)
        throw ConfigError("compare: duplicate variant '" + entries[i].label + "'");
  for (const auto &e : entries) check_comparable(entries.front().config, e.config);

  const auto root = resolve_output_dir(o.out, entries.front().config.output_dir);
  prepare_output_dir(root, o.overwrite);
  std::vector<CampaignSummary> runs;
  for (const auto &e : entries) {
    for (int rep = 0; rep < e.config.repetitions; ++rep) {
      CampaignConfig c = e.config;
      c.settings.ga.rng_seed = e.config.settings.ga.rng_seed + static_cast<std::uint64_t>(rep);
      const auto dir = root / (e.label + "_seed" + std::to_string(c.settings.ga.rng_seed));
      prepare_output_dir(dir, false);
      log << "compare: " << e.label << " seed " << c.settings.ga.rng_seed << "\n";
      const CampaignState st = run_campaign_to_dir(c, dir, log);
      const CampaignReport rep_r = analyze_results(st.results, c.settings,
                                                   c.settings.fault.pre_crash_m,
                                                   FusionMethod::best_sensor, c.settings.parallel);
      write_report(dir / "report", rep_r);
      print_report_summary(rep_r, log);
      runs.push_back({e.label, c.settings.ga.algorithm, c.settings.fusion, c.settings.ga.rng_seed,
                      rep_r.generations});
    }
  }
  write_text_file(root / "comparison.csv", comparison_csv(runs));
  write_text_file(root / "comparison_runs.csv", comparison_runs_csv(runs));
  log << "comparison: " << (root / "comparison.csv").string() << "\n";
  return kOk;
}

struct FixtureRun {
  SimulationTrace trace;
  std::optional<ReplayResult> replay;
  std::optional<SimulationTrace> repair;
};

inline FixtureRun run_fixture(const Fixture &f, FusionMethod fusion, double m) {
  FixtureRun r{run_simulation(f.genome, fusion, f.config), std::nullopt, std::nullopt};
  if (r.trace.collided()) r.replay = counterfactual_replay(r.trace, m);
  if (f.repair) r.repair = run_simulation(f.genome, *f.repair, f.config);
  return r;
}

inline std::string lead_str(const MaybeLead &l) {
  if (!l) return "none";
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << l->rel_x << "m";
  if (l->confidence) s << " conf " << *l->confidence;
  return s.str();
}

inline int cmd_fixture(const std::string &name, const CommonOptions &o, std::ostream &log) {
  const Fixture f = fixture_by_name(name);
  const FusionMethod fusion = o.fusion ? parse_fusion_method(*o.fusion) : f.fusion;
  const double m = o.pre_crash_m.value_or(2.5);
  if (!(m > 0)) throw ConfigError("pre-crash-m must be > 0");
  const FixtureRun r = run_fixture(f, fusion, m);
  log << "fixture " << f.name << " under " << to_string(fusion) << "\n" << f.description << "\n";
  log << "time   gap_gt   camera(best)        radar(nearest)  decision          fused      accel\n";
  for (const auto &fr : r.trace.frames) {
    const Lead *cam = nullptr;
    for (const auto &c : fr.camera_leads)
      if (!cam || c.confidence.value_or(0) > cam->confidence.value_or(0)) cam = &c;
    const Lead *rad = nullptr;
    for (const auto &x : fr.radar_leads)
      if (!rad || x.rel_x < rad->rel_x) rad = &x;
    std::ostringstream line;
    line << std::fixed << std::setprecision(2) << std::setw(6) << fr.time << " "
         << std::setw(8) << lead_str(fr.ground_truth) << " " << std::setw(19)
         << lead_str(cam ? MaybeLead(*cam) : std::nullopt) << " " << std::setw(15)
         << lead_str(rad ? MaybeLead(*rad) : std::nullopt) << " " << std::setw(17)
         << to_string(fr.decision) << " " << std::setw(10) << lead_str(fr.fusion_out) << " "
         << std::setprecision(2) << fr.accel_cmd;
    log << line.str() << "\n";
  }
  if (r.trace.collision)
    log << "collision at " << fmt_num(r.trace.collision->time) << " s with npc "
        << r.trace.collision->npc_id << "\n";
  else
    log << "no collision\n";
  if (r.replay)
    log << "replay with best_sensor over [" << fmt_num(r.replay->window_start) << ", "
        << fmt_num(r.replay->window_end) << "]: " << to_string(r.replay->classification) << "\n";
  if (r.repair)
    log << "under " << to_string(*f.repair) << ": "
        << (r.repair->collided() ? "collision" : "no collision") << "\n";
  if (o.out) {
    const std::filesystem::path dir = *o.out;
    prepare_output_dir(dir, o.overwrite);
    write_trace(dir / (f.name + ".jsonl"), r.trace);
  }
  return kOk;
}

}  // namespace fused::cli
