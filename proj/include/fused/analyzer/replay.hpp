#pragma once

#include <algorithm>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fused/core/errors.hpp"
#include "fused/core/parallel.hpp"
#include "fused/fuzzer/campaign.hpp"
#include "fused/sim/simulation.hpp"

namespace fused {

enum class Classification { fusion_error, not_fusion_error };

inline std::string_view to_string(Classification c) {
  return c == Classification::fusion_error ? "fusion_error" : "not_fusion_error";
}

struct ReplayResult {
  bool original_collided = false;
  bool counterfactual_collided = false;
  double window_start = 0.0;
  double window_end = 0.0;
  Classification classification = Classification::not_fusion_error;
  std::shared_ptr<const SimulationTrace> counterfactual;
};

/// Throws DeterminismError unless every frame of `replay` that precedes the
/// first overridden tick equals the matching frame of `original`.
inline void check_replay_prefix(const SimulationTrace &original, const SimulationTrace &replay) {
  const std::size_t n = std::min(original.frames.size(), replay.frames.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (replay.frames[i].overridden) return;
    if (!(original.frames[i] == replay.frames[i]))
      throw DeterminismError("replay diverged from the original run at tick " +
                             std::to_string(original.frames[i].tick) + " before the override window");
  }
  if (replay.frames.size() != original.frames.size())
    throw DeterminismError("replay and original differ in length without reaching the override window");
}

/// One extra run with the window [max(0, t_c - m), horizon] handed to
/// `replacement`, classified by whether that avoided the collision.
inline ReplayResult counterfactual_replay(const SimulationTrace &original, double m,
                                          FusionMethod replacement = FusionMethod::best_sensor) {
  if (!original.collision) throw ConfigError("counterfactual_replay needs a colliding trace");
  if (!(m >= 0)) throw ConfigError("pre-crash m must be >= 0");
  const double t_c = original.collision->time;
  ReplayResult r;
  r.original_collided = true;
  r.window_start = std::max(0.0, t_c - m);
  r.window_end = original.config.horizon;
  const OverrideWindow w{r.window_start, r.window_end, replacement};
  auto cf = std::make_shared<SimulationTrace>(
      run_simulation(original.scenario, original.fusion_method, original.config, w));
  check_replay_prefix(original, *cf);
  r.counterfactual_collided = cf->collided();
  r.classification = r.counterfactual_collided ? Classification::not_fusion_error
                                               : Classification::fusion_error;
  r.counterfactual = std::move(cf);
  return r;
}

inline ReplayResult counterfactual_replay(const ScenarioGenome &g, FusionMethod fusion,
                                          const SimConfig &cfg, double m,
                                          FusionMethod replacement = FusionMethod::best_sensor) {
  const SimulationTrace original = run_simulation(g, fusion, cfg);
  return counterfactual_replay(original, m, replacement);
}

struct SanityMismatch {
  int evaluation_id = 0;
  bool recorded_collided = false;
  bool replay_collided = false;
  std::uint64_t recorded_digest = 0;
  std::uint64_t replay_digest = 0;
  std::shared_ptr<const SimulationTrace> recorded;  // when the result kept one
  std::shared_ptr<const SimulationTrace> replayed;
};

struct SanityTally {
  int collision_selected = 0;
  int collision_flag_reproduced = 0;
  int collision_bit_exact = 0;
  int clean_selected = 0;
  int clean_flag_reproduced = 0;
  int clean_bit_exact = 0;
  std::vector<SanityMismatch> mismatches;

  bool all_reproduced() const {
    return collision_bit_exact == collision_selected && clean_bit_exact == clean_selected &&
           collision_flag_reproduced == collision_selected &&
           clean_flag_reproduced == clean_selected;
  }
};

/// Reruns up to n randomly chosen colliding and n non-colliding results and
/// checks that each reproduces both its collided flag and its trace digest.
inline SanityTally sanity_replay(std::span<const EvaluationResult> results, int n,
                                 const CampaignSettings &s, std::uint64_t seed = 0,
                                 unsigned parallel = 1) {
  SanityTally tally;
  if (n <= 0) return tally;
  std::vector<std::size_t> hit, clean;
  for (std::size_t i = 0; i < results.size(); ++i)
    (results[i].collided ? hit : clean).push_back(i);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> pick_hit, pick_clean;
  std::sample(hit.begin(), hit.end(), std::back_inserter(pick_hit), n, rng);
  std::sample(clean.begin(), clean.end(), std::back_inserter(pick_clean), n, rng);
  std::vector<std::size_t> picks = pick_hit;
  picks.insert(picks.end(), pick_clean.begin(), pick_clean.end());

  std::vector<std::shared_ptr<SimulationTrace>> reruns(picks.size());
  parallel_for(picks.size(), parallel, [&](std::size_t k) {
    const auto &r = results[picks[k]];
    reruns[k] = std::make_shared<SimulationTrace>(run_simulation(r.genome, s.fusion, s.sim));
  });
  for (std::size_t k = 0; k < picks.size(); ++k) {
    const auto &r = results[picks[k]];
    const bool flag = reruns[k]->collided() == r.collided;
    const std::uint64_t d = trace_digest(*reruns[k]);
    const bool exact = flag && d == r.digest;
    if (r.collided) {
      ++tally.collision_selected;
      tally.collision_flag_reproduced += flag;
      tally.collision_bit_exact += exact;
    } else {
      ++tally.clean_selected;
      tally.clean_flag_reproduced += flag;
      tally.clean_bit_exact += exact;
    }
    if (!exact)
      tally.mismatches.push_back({r.id, r.collided, reruns[k]->collided(), r.digest, d, r.trace,
                                  reruns[k]});
  }
  return tally;
}

}  // namespace fused
