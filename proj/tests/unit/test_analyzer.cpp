#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "helpers.hpp"

using namespace fused;

namespace {

// sup over all sample points of |F_a(x) - F_b(x)|, evaluated point by point.
double reference_ks(const std::vector<double> &a, const std::vector<double> &b) {
  std::vector<double> pts = a;
  pts.insert(pts.end(), b.begin(), b.end());
  double best = 0.0;
  for (double x : pts) {
    const double fa = static_cast<double>(std::count_if(a.begin(), a.end(), [&](double v) { return v <= x; })) / a.size();
    const double fb = static_cast<double>(std::count_if(b.begin(), b.end(), [&](double v) { return v <= x; })) / b.size();
    best = std::max(best, std::abs(fa - fb));
  }
  return best;
}

TrajectoryVector random_plane(std::mt19937_64 &rng, int rows, int cols) {
  TrajectoryVector v(rows, cols);
  std::uniform_int_distribution<int> c(-1, cols - 1);
  for (int r = 0; r < rows; ++r) {
    const int k = c(rng);
    if (k >= 0) v.set(r, k);
  }
  return v;
}

SimulationTrace colliding_fixture_trace() {
  const Fixture fx = fixture_by_name("camera_blind_cutin");
  return run_simulation(fx.genome, fx.fusion, fx.config);
}

}  // namespace

TEST(Ks, HandEnumeratedCases) {
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 2, 3}, {2, 3, 4}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 2}, {3, 4, 5}), 1.0);
  EXPECT_DOUBLE_EQ(ks_two_sample({0, 0, 1}, {0, 1, 1}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(ks_two_sample({1}, {1, 2}), 0.5);
  EXPECT_THROW(ks_two_sample({}, {1}), ConfigError);
}

TEST(Ks, MatchesPointwiseReferenceOnSmallSamples) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> n(1, 10), v(0, 6);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> a(static_cast<std::size_t>(n(rng))), b(static_cast<std::size_t>(n(rng)));
    for (auto &x : a) x = v(rng);
    for (auto &x : b) x = v(rng);
    const double ks = ks_two_sample(a, b);
    EXPECT_NEAR(ks, reference_ks(a, b), 1e-15);
    EXPECT_DOUBLE_EQ(ks, ks_two_sample(b, a));
  }
}

TEST(Ecdf, StepsAtDistinctValues) {
  const auto e = ecdf({3, 1, 2, 2});
  ASSERT_EQ(e.size(), 3u);
  EXPECT_DOUBLE_EQ(e[0].x, 1);
  EXPECT_DOUBLE_EQ(e[0].f, 0.25);
  EXPECT_DOUBLE_EQ(e[1].x, 2);
  EXPECT_DOUBLE_EQ(e[1].f, 0.75);
  EXPECT_DOUBLE_EQ(e[2].f, 1.0);
  EXPECT_TRUE(ecdf({}).empty());
}

TEST(Coverage, MeanSpeedPerInterval) {
  CoverageParams p;  // 30 rows, 10 bins of 4 m/s
  const std::vector<EgoSample> samples{{0.0, 3.0}, {2.0, 5.0}, {7.0, 10.0}, {500.0, 50.0}};
  const TrajectoryVector v = coverage_from_samples(samples, 150.0, p);
  EXPECT_EQ(v.at(0, 1), 1);    // mean 4 m/s lands in bin 1
  EXPECT_EQ(v.at(1, 2), 1);    // 10 m/s in the second 5 m interval
  EXPECT_EQ(v.at(29, 9), 1);   // past the end and above v_max clamp to the last cell
  EXPECT_EQ(v.nonzero(), 3);
  EXPECT_TRUE(structurally_valid(v));
}

TEST(Coverage, SimulatedTracesAreStructurallyValid) {
  SimConfig cfg;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SimulationTrace t =
        run_simulation(fused::testing::random_genome(seed), FusionMethod::default_rule, cfg);
    const TrajectoryVector v = trajectory_coverage(t);
    EXPECT_TRUE(structurally_valid(v));
    std::set<int> rows;
    for (const auto &s : ego_samples(t, 2.0))
      rows.insert(std::clamp(static_cast<int>(std::floor(s.pos / (cfg.env.road_length / 30))), 0, 29));
    EXPECT_EQ(v.nonzero(), static_cast<int>(rows.size()));
  }
}

TEST(Coverage, StructuralCheckCatchesBrokenPlanes) {
  TrajectoryVector v(3, 3);
  v.set(0, 0);
  v.set(0, 1);
  EXPECT_FALSE(structurally_valid(v));
  TrajectoryVector w(3, 3);
  w.cells[4] = 2;
  EXPECT_FALSE(structurally_valid(w));
}

TEST(L0, IsAMetric) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_plane(rng, 6, 3), b = random_plane(rng, 6, 3), c = random_plane(rng, 6, 3);
    EXPECT_EQ(l0_distance(a, a), 0);
    EXPECT_EQ(l0_distance(a, b), l0_distance(b, a));
    EXPECT_LE(l0_distance(a, c), l0_distance(a, b) + l0_distance(b, c));
    EXPECT_EQ(l0_distance(a, b) == 0, a == b);
  }
  EXPECT_THROW(l0_distance(TrajectoryVector(2, 2), TrajectoryVector(3, 2)), ConfigError);
}

TEST(Dedup, AgreesWithBruteForceUniqueness) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TrajectoryVector> vs;
    for (int i = 0; i < 30; ++i) vs.push_back(random_plane(rng, 3, 2));
    const auto kept = dedup_distinct(vs);
    std::vector<std::vector<std::uint8_t>> firsts;
    std::vector<std::size_t> expect;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (std::find(firsts.begin(), firsts.end(), vs[i].cells) != firsts.end()) continue;
      firsts.push_back(vs[i].cells);
      expect.push_back(i);
    }
    EXPECT_EQ(kept, expect);
  }
}

TEST(Replay, BestSensorAvoidsFixtureCollision) {
  const SimulationTrace t = colliding_fixture_trace();
  ASSERT_TRUE(t.collided());
  const ReplayResult r = counterfactual_replay(t, 2.5);
  EXPECT_EQ(r.classification, Classification::fusion_error);
  EXPECT_FALSE(r.counterfactual_collided);
  EXPECT_NEAR(r.window_start, t.collision->time - 2.5, 1e-12);
  EXPECT_DOUBLE_EQ(r.window_end, t.config.horizon);
}

TEST(Replay, ReplacingWithTheSameRuleChangesNothing) {
  const SimulationTrace t = colliding_fixture_trace();
  const ReplayResult r = counterfactual_replay(t, 2.5, FusionMethod::default_rule);
  EXPECT_EQ(r.classification, Classification::not_fusion_error);
  ASSERT_TRUE(r.counterfactual);
  EXPECT_EQ(r.counterfactual->collision, t.collision);
}

TEST(Replay, WindowStartClampsAtZero) {
  const SimulationTrace t = colliding_fixture_trace();
  const ReplayResult r = counterfactual_replay(t, 1e6);
  EXPECT_DOUBLE_EQ(r.window_start, 0.0);
}

TEST(Replay, RejectsCleanTraceAndNegativeWindow) {
  SimulationTrace t = colliding_fixture_trace();
  EXPECT_THROW(counterfactual_replay(t, -1.0), ConfigError);
  t.collision.reset();
  EXPECT_THROW(counterfactual_replay(t, 2.5), ConfigError);
}

TEST(Replay, PrefixCheckDetectsDivergence) {
  const SimulationTrace t = colliding_fixture_trace();
  SimulationTrace r = run_simulation(t.scenario, t.fusion_method, t.config,
                                     OverrideWindow{t.collision->time - 2.5, t.config.horizon});
  EXPECT_NO_THROW(check_replay_prefix(t, r));
  r.frames[3].accel_cmd += 1e-9;
  EXPECT_THROW(check_replay_prefix(t, r), DeterminismError);
}

TEST(Sanity, ReplaysReproduceRecordedDigests) {
  CampaignSettings s;
  s.ga.population = 10;
  s.ga.generations = 2;
  const CampaignState st = run_campaign(s);
  SanityTally t = sanity_replay(st.results, 5, s, 1);
  EXPECT_TRUE(t.all_reproduced());
  EXPECT_EQ(t.collision_selected + t.clean_selected,
            std::min<int>(5, static_cast<int>(st.archive.size())) +
                std::min<int>(5, static_cast<int>(st.results.size() - st.archive.size())));
  std::vector<EvaluationResult> tampered = st.results;
  for (auto &r : tampered) r.digest ^= 1;
  t = sanity_replay(tampered, 5, s, 1);
  EXPECT_FALSE(t.all_reproduced());
  EXPECT_EQ(t.mismatches.size(), static_cast<std::size_t>(t.collision_selected + t.clean_selected));
}

TEST(Report, CountsAreConsistent) {
  CampaignSettings s;
  s.ga.population = 10;
  s.ga.generations = 3;
  const CampaignState st = run_campaign(s);
  const CampaignReport rep = analyze_results(st.results, s, 2.5);
  ASSERT_EQ(rep.generations.size(), 3u);
  for (std::size_t g = 0; g < 3; ++g) {
    const auto &row = rep.generations[g];
    EXPECT_EQ(row.evaluations, static_cast<int>(10 * (g + 1)));
    EXPECT_LE(row.distinct_fusion_errors, row.fusion_errors);
    EXPECT_LE(row.fusion_errors, row.collisions);
    if (g > 0) {
      EXPECT_GE(row.collisions, rep.generations[g - 1].collisions);
      EXPECT_GE(row.fusion_errors, rep.generations[g - 1].fusion_errors);
    }
  }
  EXPECT_EQ(rep.collisions(), static_cast<int>(st.archive.size()));
  EXPECT_EQ(rep.replays.size(), st.archive.size());
  std::size_t total = 0;
  for (const auto &g : rep.f_fusion_groups) total += g.size();
  EXPECT_EQ(total, st.results.size());
  EXPECT_EQ(rep.f_fusion_groups[2].size(), static_cast<std::size_t>(rep.fusion_errors()));
  ASSERT_EQ(rep.ks.size(), 3u);
}

TEST(Report, ParallelAnalysisMatchesSequential) {
  CampaignSettings s;
  s.ga.population = 10;
  s.ga.generations = 2;
  const CampaignState st = run_campaign(s);
  const CampaignReport a = analyze_results(st.results, s, 2.5);
  const CampaignReport b = analyze_results(st.results, s, 2.5, FusionMethod::best_sensor, 3);
  ASSERT_EQ(a.replays.size(), b.replays.size());
  for (std::size_t i = 0; i < a.replays.size(); ++i) {
    EXPECT_EQ(a.replays[i].replay.classification, b.replays[i].replay.classification);
    EXPECT_EQ(a.replays[i].distinct, b.replays[i].distinct);
  }
  EXPECT_EQ(a.f_fusion_groups, b.f_fusion_groups);
}
