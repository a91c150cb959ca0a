#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "fused/analyzer/coverage.hpp"
#include "fused/core/parallel.hpp"
#include "fused/fuzzer/operators.hpp"
#include "fused/objectives/objectives.hpp"
#include "fused/sim/simulation.hpp"

namespace fused {

/// Everything run_campaign needs.
struct CampaignSettings {
  GAConfig ga;
  SimConfig sim;
  FusionMethod fusion = FusionMethod::default_rule;
  ObjectiveWeights weights;
  DistThresholds thresholds;
  FaultConfig fault;
  double distance_cap = kDefaultDistanceCap;
  CoverageParams coverage;
  /// When set, every evaluated genome has its lighting and weather block
  /// overwritten with this state, so the search only varies NPC behavior.
  std::optional<WeatherState> fixed_weather;
  unsigned parallel = 1;

  void validate() const {
    ga.validate();
    if (fixed_weather) {
      try {
        fused::validate(*fixed_weather);
      } catch (const ConfigError &e) {
        throw ConfigError(std::string("weather.") + e.what());
      }
    }
    sim.validate();
    thresholds.validate();
    fault.validate();
    coverage.validate();
    if (!(distance_cap > 0)) throw ConfigError("objectives.distance_cap must be > 0");
  }

  /// Weights the search actually optimizes; the plain GA ignores F_fusion.
  ObjectiveWeights search_weights() const {
    ObjectiveWeights w = weights;
    if (ga.algorithm == Algorithm::ga) w.c_fusion = 0.0;
    return w;
  }

  friend bool operator==(const CampaignSettings &, const CampaignSettings &) = default;
};

struct EvaluationResult {
  int id = 0;  // evaluation order across the campaign
  int generation = 0;
  int index = 0;  // position within the generation
  ScenarioGenome genome;
  ObjectiveValues objectives;
  bool collided = false;
  std::optional<double> collision_time;
  std::uint64_t digest = 0;
  TrajectoryVector coverage;
  /// Kept for collisions only; other traces can be regenerated on demand.
  std::shared_ptr<const SimulationTrace> trace;
};

/// Raised when a simulation throws mid-campaign; carries the genome that
/// triggered it so it can be persisted for reproduction.
class EvaluationFailure : public SimulationError {
 public:
  EvaluationFailure(const std::string &what, ScenarioGenome g, int id)
      : SimulationError(what), genome(g), evaluation_id(id) {}
  ScenarioGenome genome;
  int evaluation_id;
};

struct CampaignState {
  int generation = 0;
  std::vector<EvaluationResult> population;
  std::vector<EvaluationResult> results;  // every evaluation, in order
  std::vector<std::size_t> archive;       // indices into results of collisions
  std::mt19937_64 rng;
};

inline EvaluationResult evaluate_genome(const ScenarioGenome &g, const CampaignSettings &s,
                                        const ObjectiveWeights &w) {
  auto trace = std::make_shared<SimulationTrace>(run_simulation(g, s.fusion, s.sim));
  EvaluationResult r;
  r.genome = g;
  r.objectives = evaluate_objectives(*trace, s.fault, s.thresholds, w, s.distance_cap);
  r.collided = trace->collided();
  if (trace->collision) r.collision_time = trace->collision->time;
  r.digest = trace_digest(*trace);
  r.coverage = trajectory_coverage(*trace, s.coverage);
  if (r.collided) r.trace = std::move(trace);
  return r;
}

using GenerationCallback = std::function<void(const CampaignState &)>;

/// Generational search. Generation 0 is uniform random; later generations
/// come from tournament selection, SBX and polynomial mutation (or fresh
/// uniform samples for the random baseline). Evaluation may run in
/// parallel; results are merged in index order.
inline CampaignState run_campaign(const CampaignSettings &s,
                                  const GenerationCallback &on_generation = {}) {
  s.validate();
  const GenomeBounds bounds = make_bounds(s.sim.env);
  const ObjectiveWeights w = s.search_weights();
  CampaignState st;
  st.rng.seed(s.ga.rng_seed);
  const auto n = static_cast<std::size_t>(s.ga.population);

  std::vector<ScenarioGenome> genomes;
  for (int gen = 0; gen < s.ga.generations; ++gen) {
    genomes.clear();
    if (gen == 0 || s.ga.algorithm == Algorithm::random) {
      for (std::size_t i = 0; i < n; ++i) genomes.push_back(sample_random(bounds, st.rng));
    } else {
      std::vector<double> fit;
      for (const auto &r : st.population) fit.push_back(r.objectives.fitness);
      for (const auto &[a, b] : tournament_select(fit, st.rng)) {
        auto [c1, c2] = sbx_crossover(st.population[a].genome, st.population[b].genome, bounds,
                                      s.ga, st.rng);
        genomes.push_back(polynomial_mutation(c1, bounds, s.ga, st.rng));
        genomes.push_back(polynomial_mutation(c2, bounds, s.ga, st.rng));
      }
    }

    if (s.fixed_weather)
      for (auto &g : genomes) set_weather(g, *s.fixed_weather);

    std::vector<EvaluationResult> evaluated(n);
    const int base_id = static_cast<int>(st.results.size());
    parallel_for(n, s.parallel, [&](std::size_t i) {
      try {
        evaluated[i] = evaluate_genome(genomes[i], s, w);
      } catch (const std::exception &e) {
        throw EvaluationFailure(e.what(), genomes[i], base_id + static_cast<int>(i));
      }
    });

    st.population.clear();
    for (std::size_t i = 0; i < n; ++i) {
      auto &r = evaluated[i];
      r.id = base_id + static_cast<int>(i);
      r.generation = gen;
      r.index = static_cast<int>(i);
      if (r.collided) st.archive.push_back(st.results.size());
      st.results.push_back(r);
      st.population.push_back(std::move(r));
    }
    st.generation = gen;
    if (on_generation) on_generation(st);
  }
  return st;
}

}  // namespace fused
