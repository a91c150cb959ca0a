#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"

using namespace fused;

namespace {

CampaignSettings small_settings(Algorithm a, std::uint64_t seed = 3) {
  CampaignSettings s;
  s.ga.population = 6;
  s.ga.generations = 3;
  s.ga.algorithm = a;
  s.ga.rng_seed = seed;
  return s;
}

void expect_in_bounds(const ScenarioGenome &g, const GenomeBounds &b) {
  for (std::size_t i = 0; i < kGenomeSize; ++i) {
    EXPECT_GE(g[i], b.lower[i]) << i;
    EXPECT_LE(g[i], b.upper[i]) << i;
    if (b.discrete[i]) {
      EXPECT_EQ(g[i], std::round(g[i])) << i;
    }
  }
}

}  // namespace

TEST(Sbx, ChildrenPreserveParentMean) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0), v(-100, 100);
  for (int i = 0; i < 10000; ++i) {
    const double p1 = v(rng), p2 = v(rng), uu = u(rng);
    const auto [c1, c2] = sbx_pair(p1, p2, uu, 5.0);
    EXPECT_NEAR(c1 + c2, p1 + p2, 1e-9 * (1 + std::abs(p1) + std::abs(p2)));
  }
  const auto [a, b] = sbx_pair(2.0, 8.0, 0.5, 5.0);
  EXPECT_DOUBLE_EQ(a, 2.0);
  EXPECT_DOUBLE_EQ(b, 8.0);
}

TEST(Sbx, SpreadFactorMatchesClosedForm) {
  EXPECT_DOUBLE_EQ(sbx_beta(0.25, 1.0), std::sqrt(0.5));
  EXPECT_DOUBLE_EQ(sbx_beta(0.75, 1.0), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(sbx_beta(0.5, 20.0), 1.0);
}

TEST(Sbx, CrossoverStaysInsideBounds) {
  const GenomeBounds b = make_bounds(s1_environment());
  GAConfig cfg;
  cfg.crossover_prob = 1.0;
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const auto p1 = sample_random(b, rng), p2 = sample_random(b, rng);
    const auto [c1, c2] = sbx_crossover(p1, p2, b, cfg, rng);
    expect_in_bounds(c1, b);
    expect_in_bounds(c2, b);
    for (std::size_t k = 0; k < kGenomeSize; ++k) {
      if (!b.discrete[k]) continue;
      // discrete genes are exchanged, never blended
      EXPECT_TRUE((c1[k] == p1[k] && c2[k] == p2[k]) || (c1[k] == p2[k] && c2[k] == p1[k]));
    }
  }
}

TEST(Sbx, ZeroProbabilityCopiesParents) {
  const GenomeBounds b = make_bounds(s1_environment());
  GAConfig cfg;
  cfg.crossover_prob = 0.0;
  std::mt19937_64 rng(3);
  const auto p1 = sample_random(b, rng), p2 = sample_random(b, rng);
  const auto [c1, c2] = sbx_crossover(p1, p2, b, cfg, rng);
  EXPECT_EQ(c1, p1);
  EXPECT_EQ(c2, p2);
}

TEST(Mutation, DeltaIsBoundedAndMonotone) {
  EXPECT_DOUBLE_EQ(polynomial_delta(0.5, 5.0), 0.0);
  EXPECT_DOUBLE_EQ(polynomial_delta(0.0, 5.0), -1.0);
  double prev = -1.0;
  for (double u = 0.001; u < 1.0; u += 0.001) {
    const double d = polynomial_delta(u, 5.0);
    EXPECT_GE(d, prev);
    EXPECT_GE(d, -1.0);
    EXPECT_LE(d, 1.0);
    prev = d;
  }
}

TEST(Mutation, RateZeroIsIdentityAndResultsStayInBounds) {
  const GenomeBounds b = make_bounds(s1_environment());
  std::mt19937_64 rng(4);
  GAConfig none;
  none.mutation_rate = 0.0;
  GAConfig all;
  all.mutation_rate = 1.0;
  for (int i = 0; i < 300; ++i) {
    const auto g = sample_random(b, rng);
    EXPECT_EQ(polynomial_mutation(g, b, none, rng), g);
    expect_in_bounds(polynomial_mutation(g, b, all, rng), b);
  }
}

TEST(RandomSampling, CoversTheBoxAndDiscreteValues) {
  const GenomeBounds b = make_bounds(s1_environment());
  std::mt19937_64 rng(5);
  std::array<bool, 3> seen{};
  for (int i = 0; i < 200; ++i) {
    const auto g = sample_random(b, rng);
    expect_in_bounds(g, b);
    seen[static_cast<std::size_t>(g[lane_change_index(0, 0)])] = true;
  }
  EXPECT_TRUE(seen[0] && seen[1] && seen[2]);
}

TEST(Tournament, BestNeverLosesAndWorstOnlyBeatsItself) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> fit(10);
    for (auto &f : fit) f = u(rng);
    const auto best = static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin());
    const auto worst =
        static_cast<std::size_t>(std::max_element(fit.begin(), fit.end()) - fit.begin());
    const auto pairs = tournament_select(fit, rng);
    ASSERT_EQ(pairs.size(), 5u);
    // each index enters twice; the best wins both entries unless they meet
    int count = 0, worst_count = 0;
    for (auto [a, c] : pairs) {
      count += (a == best) + (c == best);
      worst_count += (a == worst) + (c == worst);
    }
    EXPECT_GE(count, 1);
    EXPECT_LE(count, 2);
    EXPECT_LE(worst_count, 1);
  }
  std::vector<double> odd(3);
  EXPECT_THROW(tournament_select(odd, rng), ConfigError);
}

TEST(GAConfig, Validation) {
  GAConfig c;
  c.population = 7;
  EXPECT_THROW(c.validate(), ConfigError);
  c = GAConfig{};
  c.mutation_rate = 2;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_THROW(parse_algorithm("nsga"), ConfigError);
  EXPECT_EQ(parse_algorithm("random"), Algorithm::random);
}

TEST(Campaign, ShapeAndBookkeeping) {
  const CampaignState st = run_campaign(small_settings(Algorithm::ga_fusion));
  ASSERT_EQ(st.results.size(), 18u);
  for (std::size_t i = 0; i < st.results.size(); ++i) {
    EXPECT_EQ(st.results[i].id, static_cast<int>(i));
    EXPECT_EQ(st.results[i].generation, static_cast<int>(i / 6));
    EXPECT_EQ(st.results[i].index, static_cast<int>(i % 6));
    EXPECT_EQ(st.results[i].collided, st.results[i].trace != nullptr);
  }
  std::vector<std::size_t> collided;
  for (std::size_t i = 0; i < st.results.size(); ++i)
    if (st.results[i].collided) collided.push_back(i);
  EXPECT_EQ(st.archive, collided);
}

TEST(Campaign, SameSeedSameCampaignRegardlessOfThreads) {
  CampaignSettings s = small_settings(Algorithm::ga);
  const CampaignState a = run_campaign(s);
  s.parallel = 3;
  const CampaignState b = run_campaign(s);
  ASSERT_EQ(a.results.size(), b.results.size());
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    EXPECT_EQ(a.results[i].genome, b.results[i].genome);
    EXPECT_EQ(a.results[i].digest, b.results[i].digest);
    EXPECT_EQ(a.results[i].objectives, b.results[i].objectives);
  }
}

TEST(Campaign, DifferentSeedsDiffer) {
  const CampaignState a = run_campaign(small_settings(Algorithm::random, 1));
  const CampaignState b = run_campaign(small_settings(Algorithm::random, 2));
  EXPECT_NE(a.results[0].genome, b.results[0].genome);
}

TEST(Campaign, PlainGaIgnoresFusionTerm) {
  CampaignSettings s = small_settings(Algorithm::ga);
  EXPECT_EQ(s.search_weights().c_fusion, 0.0);
  for (const auto &r : run_campaign(s).results)
    EXPECT_DOUBLE_EQ(r.objectives.fitness, -r.objectives.f_failure + r.objectives.f_d);
  s.ga.algorithm = Algorithm::ga_fusion;
  EXPECT_EQ(s.search_weights().c_fusion, -2.0);
}

TEST(Campaign, FixedWeatherPinsEveryGenome) {
  CampaignSettings s = small_settings(Algorithm::ga_fusion);
  WeatherState w;
  w.fog_density = 12.0;
  s.fixed_weather = w;
  for (const auto &r : run_campaign(s).results)
    EXPECT_EQ(decode(r.genome, s.sim.env).weather, w);
  s.fixed_weather->fog_density = 1000.0;
  try {
    run_campaign(s);
    FAIL();
  } catch (const ConfigError &e) {
    EXPECT_EQ(std::string(e.what()).rfind("weather.", 0), 0u);
  }
}

TEST(Campaign, CallbackSeesEveryGeneration) {
  std::vector<int> gens;
  run_campaign(small_settings(Algorithm::ga_fusion),
               [&](const CampaignState &st) { gens.push_back(st.generation); });
  EXPECT_EQ(gens, (std::vector<int>{0, 1, 2}));
}

TEST(Campaign, RecordedDigestMatchesRerun) {
  const CampaignSettings s = small_settings(Algorithm::ga_fusion);
  const CampaignState st = run_campaign(s);
  for (const auto &r : st.results)
    EXPECT_EQ(trace_digest(run_simulation(r.genome, s.fusion, s.sim)), r.digest);
}
