#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "fused/analyzer/report.hpp"
#include "fused/io/store.hpp"

namespace fused {

/// Shortest decimal form that parses back to the same double.
inline std::string fmt_num(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string generations_csv(const CampaignReport &r) {
  std::string s = "generation,evaluations,collisions,fusion_errors,distinct_fusion_errors\n";
  for (const auto &g : r.generations)
    s += std::to_string(g.generation) + "," + std::to_string(g.evaluations) + "," +
         std::to_string(g.collisions) + "," + std::to_string(g.fusion_errors) + "," +
         std::to_string(g.distinct_fusion_errors) + "\n";
  return s;
}

inline std::string replays_csv(const CampaignReport &r) {
  std::string s =
      "evaluation_id,generation,collision_time,window_start,window_end,classification,"
      "counterfactual_collided,distinct\n";
  for (const auto &x : r.replays)
    s += std::to_string(x.evaluation_id) + "," + std::to_string(x.generation) + "," +
         fmt_num(x.collision_time) + "," + fmt_num(x.replay.window_start) + "," +
         fmt_num(x.replay.window_end) + "," + std::string(to_string(x.replay.classification)) +
         "," + (x.replay.counterfactual_collided ? "1" : "0") + "," + (x.distinct ? "1" : "0") +
         "\n";
  return s;
}

/// Long format: one row per evaluation with its group and F_fusion.
inline std::string ffusion_groups_csv(const CampaignReport &r) {
  std::string s = "group,f_fusion\n";
  for (std::size_t g = 0; g < 3; ++g)
    for (double v : r.f_fusion_groups[g]) s += std::string(kGroupNames[g]) + "," + fmt_num(v) + "\n";
  return s;
}

inline std::string ecdf_csv(const std::vector<double> &values) {
  std::string s = "f_fusion,cdf\n";
  for (const auto &p : ecdf(values)) s += fmt_num(p.x) + "," + fmt_num(p.f) + "\n";
  return s;
}

inline std::string ks_csv(const CampaignReport &r) {
  std::string s = "group_a,group_b,n_a,n_b,statistic\n";
  for (const auto &k : r.ks) {
    const auto &a = r.f_fusion_groups[static_cast<std::size_t>(k.a)];
    const auto &b = r.f_fusion_groups[static_cast<std::size_t>(k.b)];
    s += std::string(kGroupNames[static_cast<std::size_t>(k.a)]) + "," +
         kGroupNames[static_cast<std::size_t>(k.b)] + "," + std::to_string(a.size()) + "," +
         std::to_string(b.size()) + "," + (k.statistic ? fmt_num(*k.statistic) : "") + "\n";
  }
  return s;
}

inline std::string sanity_csv(const SanityTally &t) {
  return "kind,selected,flag_reproduced,bit_exact\ncollision," +
         std::to_string(t.collision_selected) + "," + std::to_string(t.collision_flag_reproduced) +
         "," + std::to_string(t.collision_bit_exact) + "\nno_collision," +
         std::to_string(t.clean_selected) + "," + std::to_string(t.clean_flag_reproduced) + "," +
         std::to_string(t.clean_bit_exact) + "\n";
}

/// Writes every report table into `dir` and returns the file names written.
inline std::vector<std::string> write_report(const std::filesystem::path &dir,
                                             const CampaignReport &r) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  auto put = [&](const std::string &name, const std::string &text) {
    write_text_file(dir / name, text);
    files.push_back(name);
  };
  put("generations.csv", generations_csv(r));
  put("replays.csv", replays_csv(r));
  put("ffusion_groups.csv", ffusion_groups_csv(r));
  for (std::size_t g = 0; g < 3; ++g)
    put("ecdf_" + std::string(kGroupNames[g]) + ".csv", ecdf_csv(r.f_fusion_groups[g]));
  put("ks.csv", ks_csv(r));
  if (r.sanity) put("sanity.csv", sanity_csv(*r.sanity));
  return files;
}

// ---------------------------------------------------------------- comparison

struct CampaignSummary {
  std::string label;
  Algorithm algorithm = Algorithm::ga_fusion;
  FusionMethod fusion = FusionMethod::default_rule;
  std::uint64_t seed = 0;
  std::vector<GenerationRow> generations;  // cumulative, as in the report
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single run
};

inline MeanStd mean_std(const std::vector<double> &v) {
  MeanStd m;
  if (v.empty()) return m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

/// One row per (label, budget): mean and std across the label's runs of the
/// cumulative fusion-error and distinct-fusion-error counts.
inline std::string comparison_csv(const std::vector<CampaignSummary> &runs) {
  std::string s =
      "label,algorithm,fusion,runs,evaluations,mean_fusion_errors,std_fusion_errors,"
      "mean_distinct_fusion_errors,std_distinct_fusion_errors\n";
  std::vector<std::string> labels;
  for (const auto &r : runs)
    if (std::find(labels.begin(), labels.end(), r.label) == labels.end()) labels.push_back(r.label);
  for (const auto &label : labels) {
    std::vector<const CampaignSummary *> group;
    for (const auto &r : runs)
      if (r.label == label) group.push_back(&r);
    std::size_t gens = group.front()->generations.size();
    for (const auto *g : group) gens = std::min(gens, g->generations.size());
    for (std::size_t k = 0; k < gens; ++k) {
      std::vector<double> fe, de;
      for (const auto *g : group) {
        fe.push_back(g->generations[k].fusion_errors);
        de.push_back(g->generations[k].distinct_fusion_errors);
      }
      const MeanStd a = mean_std(fe), b = mean_std(de);
      s += label + "," + std::string(to_string(group.front()->algorithm)) + "," +
           std::string(to_string(group.front()->fusion)) + "," + std::to_string(group.size()) +
           "," + std::to_string(group.front()->generations[k].evaluations) + "," + fmt_num(a.mean) +
           "," + fmt_num(a.std) + "," + fmt_num(b.mean) + "," + fmt_num(b.std) + "\n";
    }
  }
  return s;
}

/// Final totals of every individual campaign, matching each report's last
/// generations.csv row.
inline std::string comparison_runs_csv(const std::vector<CampaignSummary> &runs) {
  std::string s = "label,algorithm,fusion,seed,evaluations,collisions,fusion_errors,"
                  "distinct_fusion_errors\n";
  for (const auto &r : runs) {
    const GenerationRow last = r.generations.empty() ? GenerationRow{} : r.generations.back();
    s += r.label + "," + std::string(to_string(r.algorithm)) + "," +
         std::string(to_string(r.fusion)) + "," + std::to_string(r.seed) + "," +
         std::to_string(last.evaluations) + "," + std::to_string(last.collisions) + "," +
         std::to_string(last.fusion_errors) + "," + std::to_string(last.distinct_fusion_errors) +
         "\n";
  }
  return s;
}

}  // namespace fused
