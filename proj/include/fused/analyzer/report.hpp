#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fused/analyzer/coverage.hpp"
#include "fused/analyzer/ks.hpp"
#include "fused/analyzer/replay.hpp"
#include "fused/core/parallel.hpp"
#include "fused/fuzzer/campaign.hpp"

namespace fused {

struct ReplayRecord {
  int evaluation_id = 0;
  int generation = 0;
  double collision_time = 0.0;
  ReplayResult replay;
  TrajectoryVector coverage;
  bool distinct = false;  // kept by first-seen dedup among fusion errors
};

struct GenerationRow {
  int generation = 0;
  int evaluations = 0;  // cumulative
  int collisions = 0;   // cumulative
  int fusion_errors = 0;
  int distinct_fusion_errors = 0;
};

enum class FusionGroup { no_collision = 0, non_fusion_error = 1, fusion_error = 2 };
inline constexpr std::array<const char *, 3> kGroupNames{"no_collision", "non_fusion_error",
                                                         "fusion_error"};

struct KsRow {
  FusionGroup a;
  FusionGroup b;
  std::optional<double> statistic;  // absent when either group is empty
};

struct CampaignReport {
  double pre_crash_m = 2.5;
  std::vector<GenerationRow> generations;
  std::array<std::vector<double>, 3> f_fusion_groups;
  std::vector<KsRow> ks;
  std::vector<ReplayRecord> replays;
  std::optional<SanityTally> sanity;

  int collisions() const { return generations.empty() ? 0 : generations.back().collisions; }
  int fusion_errors() const { return generations.empty() ? 0 : generations.back().fusion_errors; }
  int distinct_fusion_errors() const {
    return generations.empty() ? 0 : generations.back().distinct_fusion_errors;
  }
};

/// Replays every colliding result with the replacement fusion in its
/// pre-crash window, dedups the fusion errors by trajectory coverage and
/// aggregates per-generation counts, F_fusion groups and KS statistics.
inline CampaignReport analyze_results(std::span<const EvaluationResult> results,
                                      const CampaignSettings &s, double m,
                                      FusionMethod replacement = FusionMethod::best_sensor,
                                      unsigned parallel = 1) {
  CampaignReport rep;
  rep.pre_crash_m = m;
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < results.size(); ++i)
    if (results[i].collided) hits.push_back(i);

  std::vector<ReplayRecord> recs(hits.size());
  parallel_for(hits.size(), parallel, [&](std::size_t k) {
    const auto &r = results[hits[k]];
    std::shared_ptr<const SimulationTrace> original = r.trace;
    if (!original)
      original = std::make_shared<SimulationTrace>(run_simulation(r.genome, s.fusion, s.sim));
    if (!original->collided())
      throw DeterminismError("evaluation " + std::to_string(r.id) +
                             " was recorded as colliding but its rerun does not collide");
    recs[k].evaluation_id = r.id;
    recs[k].generation = r.generation;
    recs[k].collision_time = original->collision->time;
    recs[k].coverage = trajectory_coverage(*original, s.coverage);
    recs[k].replay = counterfactual_replay(*original, m, replacement);
  });

  std::vector<TrajectoryVector> fe_cov;
  std::vector<std::size_t> fe_rec;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    if (recs[k].replay.classification != Classification::fusion_error) continue;
    fe_cov.push_back(recs[k].coverage);
    fe_rec.push_back(k);
  }
  for (std::size_t kept : dedup_distinct(fe_cov)) recs[fe_rec[kept]].distinct = true;

  int max_gen = -1;
  for (const auto &r : results) max_gen = std::max(max_gen, r.generation);
  rep.generations.resize(static_cast<std::size_t>(max_gen + 1));
  for (int g = 0; g <= max_gen; ++g) rep.generations[static_cast<std::size_t>(g)].generation = g;
  for (const auto &r : results) rep.generations[static_cast<std::size_t>(r.generation)].evaluations++;
  std::size_t k = 0;
  std::vector<Classification> by_result(results.size(), Classification::not_fusion_error);
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].collided) continue;
    auto &row = rep.generations[static_cast<std::size_t>(results[i].generation)];
    row.collisions++;
    by_result[i] = recs[k].replay.classification;
    if (recs[k].replay.classification == Classification::fusion_error) row.fusion_errors++;
    if (recs[k].distinct) row.distinct_fusion_errors++;
    ++k;
  }
  for (std::size_t g = 1; g < rep.generations.size(); ++g) {
    auto &cur = rep.generations[g];
    const auto &prev = rep.generations[g - 1];
    cur.evaluations += prev.evaluations;
    cur.collisions += prev.collisions;
    cur.fusion_errors += prev.fusion_errors;
    cur.distinct_fusion_errors += prev.distinct_fusion_errors;
  }

  for (std::size_t i = 0; i < results.size(); ++i) {
    FusionGroup g = FusionGroup::no_collision;
    if (results[i].collided)
      g = by_result[i] == Classification::fusion_error ? FusionGroup::fusion_error
                                                       : FusionGroup::non_fusion_error;
    rep.f_fusion_groups[static_cast<std::size_t>(g)].push_back(results[i].objectives.f_fusion);
  }
  const std::array<std::pair<FusionGroup, FusionGroup>, 3> pairs{
      {{FusionGroup::fusion_error, FusionGroup::no_collision},
       {FusionGroup::fusion_error, FusionGroup::non_fusion_error},
       {FusionGroup::non_fusion_error, FusionGroup::no_collision}}};
  for (const auto &[a, b] : pairs) {
    const auto &va = rep.f_fusion_groups[static_cast<std::size_t>(a)];
    const auto &vb = rep.f_fusion_groups[static_cast<std::size_t>(b)];
    KsRow row{a, b, std::nullopt};
    if (!va.empty() && !vb.empty()) row.statistic = ks_two_sample(va, vb);
    rep.ks.push_back(row);
  }
  rep.replays = std::move(recs);
  return rep;
}

}  // namespace fused
