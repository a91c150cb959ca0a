#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"

using namespace fused;

namespace {

Lead L(double x, double y = 0.0, double v = 0.0) { return {x, y, v, std::nullopt}; }

// A synthetic collision-free trace of n frames with the ground-truth lead at gt_x.
SimulationTrace flat_trace(int n, double gt_x, double speed) {
  SimulationTrace t;
  t.config.horizon = 0.05 * n;
  for (int i = 0; i < n; ++i) {
    TraceFrame f;
    f.tick = i;
    f.time = 0.05 * i;
    f.ego_speed = speed;
    f.ground_truth = L(gt_x);
    f.fusion_out = L(gt_x);
    f.radar_leads = {L(gt_x)};
    t.frames.push_back(f);
  }
  return t;
}

// Reference: frames whose timestamp lies in [end - m, end), counted directly.
double reference_f_fusion(const SimulationTrace &t, double m, int th) {
  const double end = t.collision ? t.collision->time : t.config.horizon;
  int n = 0, hits = 0;
  for (const auto &f : t.frames) {
    if (f.time < end - m - 1e-9 || f.time >= end) continue;
    ++n;
    std::vector<int> d;
    for (const auto &l : f.camera_leads) d.push_back(dist(l, f.ground_truth));
    for (const auto &l : f.radar_leads) d.push_back(dist(l, f.ground_truth));
    // an existing sensor lead must be within th; an empty sensor list never is
    const bool some = std::any_of(d.begin(), d.end(), [&](int v) { return v <= th; });
    hits += some && dist(f.fusion_out, f.ground_truth) > th;
  }
  return n == 0 ? 0.0 : static_cast<double>(hits) / n;
}

}  // namespace

TEST(Dist, HandEvaluatedCases) {
  EXPECT_EQ(dist(L(1, 2, 3), L(1, 2, 3)), 0);
  EXPECT_EQ(dist(L(11.8, 0.5, -3.0), L(2.9, 0.2, -1.0)), 1);
  EXPECT_EQ(dist(std::nullopt, L(2.9)), 3);
  EXPECT_EQ(dist(L(2.9), std::nullopt), 3);
  EXPECT_EQ(dist(std::nullopt, std::nullopt), 0);
  EXPECT_EQ(dist(L(0, 0, 0), L(10, 2, 5)), 3);
  // thresholds are strict
  EXPECT_EQ(dist(L(0), L(4.0)), 0);
}

TEST(Dist, IsSymmetricAndBounded) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 2000; ++i) {
    const Lead a = L(u(rng), u(rng), u(rng)), b = L(u(rng), u(rng), u(rng));
    const int d = dist(a, b);
    EXPECT_EQ(d, dist(b, a));
    EXPECT_GE(d, 0);
    EXPECT_LE(d, 3);
  }
}

TEST(FusionFault, MotivatingCollisionIsAFault) {
  FusionInput in;
  in.camera_leads = {Lead{11.8, 0.5, -3.0, 13.5}};
  in.radar_tracks = {L(3.9, 0.2, -1.0)};
  const MaybeLead gt = L(2.9, 0.2, -1.0);
  EXPECT_TRUE(is_fusion_fault(in, std::nullopt, gt));
  EXPECT_FALSE(is_fusion_fault(in, in.radar_tracks[0], gt));
  FaultConfig tolerant;
  tolerant.th_err = 3;
  EXPECT_FALSE(is_fusion_fault(in, std::nullopt, gt, tolerant));
}

TEST(FusionFault, NoSensorMeansNoFault) {
  FusionInput in;
  EXPECT_FALSE(is_fusion_fault(in, std::nullopt, L(5)));
  EXPECT_FALSE(is_fusion_fault(in, L(50), L(5)));
}

TEST(FFusion, ZeroWhenFusionTracksBestSensor) {
  EXPECT_DOUBLE_EQ(f_fusion(flat_trace(100, 20.0, 10.0)), 0.0);
}

TEST(FFusion, OneFaultyFrameInFiveFrameWindow) {
  SimulationTrace t = flat_trace(100, 20.0, 10.0);
  t.frames[97].fusion_out = L(30.0);
  FaultConfig cfg;
  cfg.pre_crash_m = 0.25;  // five control ticks
  EXPECT_EQ(pre_crash_frames(t, 0.25).last - pre_crash_frames(t, 0.25).first, 5u);
  EXPECT_DOUBLE_EQ(f_fusion(t, cfg), 0.2);
  t.frames[90].fusion_out = L(30.0);  // outside the window
  EXPECT_DOUBLE_EQ(f_fusion(t, cfg), 0.2);
}

TEST(FFusion, EveryFrameFaultyGivesOne) {
  SimulationTrace t = flat_trace(100, 2.9, 10.0);
  for (auto &f : t.frames) {
    f.camera_leads = {Lead{11.8, 0.0, 0.0, 13.5}};
    f.radar_leads = {L(3.9)};
    f.fusion_out.reset();
  }
  EXPECT_DOUBLE_EQ(f_fusion(t), 1.0);
}

TEST(FFusion, WindowEndsAtCollision) {
  SimulationTrace t = flat_trace(60, 20.0, 10.0);
  t.collision = CollisionEvent{3.0, 1, 5.0, true};
  for (std::size_t i = 10; i < 60; ++i) t.frames[i].fusion_out.reset();
  t.frames.resize(60);
  FaultConfig cfg;
  cfg.pre_crash_m = 2.5;
  EXPECT_NEAR(f_fusion(t, cfg), reference_f_fusion(t, 2.5, 0), 1e-15);
  EXPECT_DOUBLE_EQ(f_fusion(t, cfg), 1.0);
}

TEST(FFusion, MatchesReferenceOnRandomTraces) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-6, 6);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 20 + trial % 80;
    SimulationTrace t = flat_trace(n, 20.0, 10.0);
    if (coin(rng)) t.collision = CollisionEvent{0.05 * n - 0.01, 1, 1.0, true};
    for (auto &f : t.frames) {
      f.ground_truth = coin(rng) ? MaybeLead{L(20 + u(rng), u(rng), u(rng))} : MaybeLead{};
      f.radar_leads.clear();
      if (coin(rng)) f.radar_leads.push_back(L(20 + u(rng), u(rng), u(rng)));
      if (coin(rng)) f.camera_leads.push_back(Lead{20 + u(rng), u(rng), u(rng), 60.0});
      f.fusion_out = coin(rng) ? MaybeLead{L(20 + u(rng), u(rng), u(rng))} : MaybeLead{};
    }
    for (double m : {0.5, 1.5, 2.5}) {
      for (int th : {0, 1}) {
        FaultConfig cfg;
        cfg.pre_crash_m = m;
        cfg.th = th;
        const double v = f_fusion(t, cfg);
        EXPECT_NEAR(v, reference_f_fusion(t, m, th), 1e-15);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
    }
  }
}

TEST(FD, StoppingDistanceArithmetic) {
  const SimulationTrace t = flat_trace(10, 30.0, 10.0);
  const double raw = 30.0 - 100.0 / 12.0;
  EXPECT_NEAR(raw, 21.67, 0.01);
  EXPECT_NEAR(f_d(t, 6.0, 100.0), raw / 100.0, 1e-12);
}

TEST(FD, CollisionAndEmptyRoad) {
  SimulationTrace t = flat_trace(10, 30.0, 10.0);
  t.collision = CollisionEvent{0.4, 1, 5.0, true};
  EXPECT_DOUBLE_EQ(f_d(t), 0.0);
  SimulationTrace open = flat_trace(10, 30.0, 10.0);
  for (auto &f : open.frames) f.ground_truth.reset();
  EXPECT_DOUBLE_EQ(f_d(open), 1.0);
  EXPECT_THROW(f_d(open, 0.0), ConfigError);
}

TEST(Fitness, WeightedSum) {
  ObjectiveValues v{1.0, 0.2, 0.5, 0.0};
  EXPECT_DOUBLE_EQ(fitness(v), -1.0 + 0.2 - 1.0);
  ObjectiveWeights w{0.0, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(fitness(v, w), 0.5);
}

TEST(Objectives, EvaluateOnSimulatedTraces) {
  SimConfig cfg;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SimulationTrace t =
        run_simulation(fused::testing::random_genome(seed), FusionMethod::default_rule, cfg);
    const ObjectiveValues v = evaluate_objectives(t, {}, {}, {});
    EXPECT_EQ(v.f_failure, t.collided() ? 1.0 : 0.0);
    EXPECT_GE(v.f_d, 0.0);
    EXPECT_LE(v.f_d, 1.0);
    if (t.collided()) {
      EXPECT_EQ(v.f_d, 0.0);
    }
    EXPECT_NEAR(v.f_fusion, reference_f_fusion(t, 2.5, 0), 1e-15);
    EXPECT_DOUBLE_EQ(v.fitness, -v.f_failure + v.f_d - 2.0 * v.f_fusion);
  }
}

TEST(FaultConfig, Validation) {
  FaultConfig c;
  c.pre_crash_m = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = FaultConfig{};
  c.th = -1;
  EXPECT_THROW(c.validate(), ConfigError);
}
