#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fused/core/errors.hpp"
#include "fused/sim/scenario.hpp"

namespace fused {

enum class Algorithm { ga_fusion, ga, random };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ga_fusion: return "ga_fusion";
    case Algorithm::ga: return "ga";
    case Algorithm::random: return "random";
  }
  return "ga_fusion";
}

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "ga_fusion") return Algorithm::ga_fusion;
  if (s == "ga") return Algorithm::ga;
  if (s == "random") return Algorithm::random;
  throw ConfigError("unknown algorithm '" + std::string(s) + "' (expected ga_fusion|ga|random)");
}

struct GAConfig {
  int population = 50;
  int generations = 10;
  double crossover_eta = 5.0;
  double crossover_prob = 0.8;
  double mutation_eta = 5.0;
  double mutation_rate = 5.0 / static_cast<double>(kGenomeSize);
  std::uint64_t rng_seed = 1;
  Algorithm algorithm = Algorithm::ga_fusion;

  void validate() const {
    if (population < 2 || population % 2 != 0)
      throw ConfigError("ga.population must be an even number >= 2");
    if (generations < 1) throw ConfigError("ga.generations must be >= 1");
    if (!(crossover_eta >= 0)) throw ConfigError("ga.crossover_eta must be >= 0");
    if (!(mutation_eta >= 0)) throw ConfigError("ga.mutation_eta must be >= 0");
    if (!(crossover_prob >= 0 && crossover_prob <= 1))
      throw ConfigError("ga.crossover_prob must lie in [0,1]");
    if (!(mutation_rate >= 0 && mutation_rate <= 1))
      throw ConfigError("ga.mutation_rate must lie in [0,1]");
  }
  friend bool operator==(const GAConfig &, const GAConfig &) = default;
};

inline double uniform01(std::mt19937_64 &rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double sample_discrete(double lo, double hi, std::mt19937_64 &rng) {
  std::uniform_int_distribution<long long> d(std::llround(lo), std::llround(hi));
  return static_cast<double>(d(rng));
}

inline ScenarioGenome sample_random(const GenomeBounds &b, std::mt19937_64 &rng) {
  ScenarioGenome g;
  for (std::size_t i = 0; i < kGenomeSize; ++i) {
    g[i] = b.discrete[i]
               ? sample_discrete(b.lower[i], b.upper[i], rng)
               : std::uniform_real_distribution<double>(b.lower[i], b.upper[i])(rng);
    g[i] = std::clamp(g[i], b.lower[i], b.upper[i]);
  }
  return g;
}

/// SBX spread factor for a uniform draw u in [0,1).
inline double sbx_beta(double u, double eta) {
  const double e = 1.0 / (eta + 1.0);
  return u <= 0.5 ? std::pow(2.0 * u, e) : std::pow(1.0 / (2.0 * (1.0 - u)), e);
}

/// Unclipped SBX children of one coordinate. Their mean equals the parents'.
inline std::pair<double, double> sbx_pair(double p1, double p2, double u, double eta) {
  const double beta = sbx_beta(u, eta);
  return {0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2),
          0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2)};
}

inline std::pair<ScenarioGenome, ScenarioGenome> sbx_crossover(const ScenarioGenome &p1,
                                                               const ScenarioGenome &p2,
                                                               const GenomeBounds &b,
                                                               const GAConfig &cfg,
                                                               std::mt19937_64 &rng) {
  ScenarioGenome c1 = p1, c2 = p2;
  for (std::size_t i = 0; i < kGenomeSize; ++i) {
    if (uniform01(rng) >= cfg.crossover_prob) continue;
    const double u = uniform01(rng);
    if (b.discrete[i]) {
      if (u < 0.5) std::swap(c1[i], c2[i]);
      continue;
    }
    const auto [a, c] = sbx_pair(p1[i], p2[i], u, cfg.crossover_eta);
    c1[i] = std::clamp(a, b.lower[i], b.upper[i]);
    c2[i] = std::clamp(c, b.lower[i], b.upper[i]);
  }
  return {c1, c2};
}

/// Polynomial-mutation step, as a fraction of the coordinate's range.
inline double polynomial_delta(double u, double eta) {
  const double e = 1.0 / (eta + 1.0);
  return u < 0.5 ? std::pow(2.0 * u, e) - 1.0 : 1.0 - std::pow(2.0 * (1.0 - u), e);
}

inline ScenarioGenome polynomial_mutation(const ScenarioGenome &g, const GenomeBounds &b,
                                          const GAConfig &cfg, std::mt19937_64 &rng) {
  ScenarioGenome out = g;
  for (std::size_t i = 0; i < kGenomeSize; ++i) {
    if (uniform01(rng) >= cfg.mutation_rate) continue;
    if (b.discrete[i]) {
      out[i] = sample_discrete(b.lower[i], b.upper[i], rng);
    } else {
      const double d = polynomial_delta(uniform01(rng), cfg.mutation_eta);
      out[i] = std::clamp(g[i] + d * (b.upper[i] - b.lower[i]), b.lower[i], b.upper[i]);
    }
  }
  return out;
}

/// Binary tournament over two shuffled copies of the population (lower
/// fitness wins, ties to the lower index); winners are shuffled into pairs.
inline std::vector<std::pair<std::size_t, std::size_t>> tournament_select(
    std::span<const double> fitness, std::mt19937_64 &rng) {
  const std::size_t n = fitness.size();
  if (n == 0 || n % 2 != 0) throw ConfigError("tournament_select requires an even population");
  std::vector<std::size_t> entrants(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) entrants[i] = i % n;
  std::shuffle(entrants.begin(), entrants.end(), rng);
  std::vector<std::size_t> winners;
  winners.reserve(n);
  for (std::size_t i = 0; i < 2 * n; i += 2) {
    const std::size_t a = entrants[i], c = entrants[i + 1];
    if (fitness[a] < fitness[c] || (fitness[a] == fitness[c] && a <= c))
      winners.push_back(a);
    else
      winners.push_back(c);
  }
  std::shuffle(winners.begin(), winners.end(), rng);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; i += 2) pairs.emplace_back(winners[i], winners[i + 1]);
  return pairs;
}

}  // namespace fused
