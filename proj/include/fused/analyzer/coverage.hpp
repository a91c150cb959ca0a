#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fused/core/errors.hpp"
#include "fused/sim/simulation.hpp"

namespace fused {

/// Speed-location occupancy plane: rows are road intervals, columns speed
/// bins. Each visited row holds a single 1 at the bin of its mean speed.
struct TrajectoryVector {
  int s = 30;
  int l = 10;
  std::vector<std::uint8_t> cells;  // row-major s x l

  TrajectoryVector() : cells(static_cast<std::size_t>(s * l), 0) {}
  TrajectoryVector(int rows, int cols)
      : s(rows), l(cols), cells(static_cast<std::size_t>(rows * cols), 0) {}

  std::uint8_t at(int row, int col) const {
    return cells[static_cast<std::size_t>(row * l + col)];
  }
  void set(int row, int col) { cells[static_cast<std::size_t>(row * l + col)] = 1; }
  int nonzero() const {
    return static_cast<int>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
  }

  friend bool operator==(const TrajectoryVector &, const TrajectoryVector &) = default;
};

struct CoverageParams {
  int s = 30;
  int l = 10;
  double v_max = 40.0;
  double sample_hz = 2.0;

  void validate() const {
    if (s < 1 || l < 1) throw ConfigError("coverage.s and coverage.l must be >= 1");
    if (!(v_max > 0)) throw ConfigError("coverage.v_max must be > 0");
    if (!(sample_hz > 0)) throw ConfigError("coverage.sample_hz must be > 0");
  }
  friend bool operator==(const CoverageParams &, const CoverageParams &) = default;
};

/// Ego position samples as (position, speed) pairs; used by the coverage
/// computation and also handy for stored summaries.
struct EgoSample {
  double pos = 0.0;
  double speed = 0.0;
};

inline std::vector<EgoSample> ego_samples(const SimulationTrace &t, double sample_hz) {
  const int stride = std::max(1, static_cast<int>(std::llround(t.config.control_hz / sample_hz)));
  std::vector<EgoSample> out;
  for (const auto &f : t.frames)
    if (f.tick % stride == 0) out.push_back({f.ego_pos, f.ego_speed});
  return out;
}

inline TrajectoryVector coverage_from_samples(std::span<const EgoSample> samples,
                                              double road_length, const CoverageParams &p = {}) {
  p.validate();
  if (!(road_length > 0)) throw ConfigError("coverage road length must be > 0");
  TrajectoryVector v(p.s, p.l);
  std::vector<double> sum(static_cast<std::size_t>(p.s), 0.0);
  std::vector<int> count(static_cast<std::size_t>(p.s), 0);
  const double interval = road_length / p.s;
  for (const auto &x : samples) {
    const int row = std::clamp(static_cast<int>(std::floor(x.pos / interval)), 0, p.s - 1);
    sum[static_cast<std::size_t>(row)] += x.speed;
    ++count[static_cast<std::size_t>(row)];
  }
  const double bin = p.v_max / p.l;
  for (int r = 0; r < p.s; ++r) {
    const int c = count[static_cast<std::size_t>(r)];
    if (c == 0) continue;
    const double avg = sum[static_cast<std::size_t>(r)] / c;
    v.set(r, std::clamp(static_cast<int>(std::floor(avg / bin)), 0, p.l - 1));
  }
  return v;
}

inline TrajectoryVector trajectory_coverage(const SimulationTrace &t, const CoverageParams &p = {}) {
  return coverage_from_samples(ego_samples(t, p.sample_hz), t.config.env.road_length, p);
}

inline int l0_distance(const TrajectoryVector &a, const TrajectoryVector &b) {
  if (a.s != b.s || a.l != b.l) throw ConfigError("trajectory vectors differ in shape");
  int d = 0;
  for (std::size_t i = 0; i < a.cells.size(); ++i) d += a.cells[i] != b.cells[i];
  return d;
}

inline bool distinct(const TrajectoryVector &a, const TrajectoryVector &b) {
  return l0_distance(a, b) > 0;
}

/// Greedy first-seen dedup: an entry is kept when it differs from every
/// entry kept before it. Returns the kept indices.
inline std::vector<std::size_t> dedup_distinct(std::span<const TrajectoryVector> vs) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const bool fresh = std::all_of(kept.begin(), kept.end(),
                                   [&](std::size_t k) { return distinct(vs[i], vs[k]); });
    if (fresh) kept.push_back(i);
  }
  return kept;
}

/// True when the plane satisfies its structural rules: binary cells, at most
/// one nonzero per row.
inline bool structurally_valid(const TrajectoryVector &v) {
  if (v.s < 1 || v.l < 1 || v.cells.size() != static_cast<std::size_t>(v.s * v.l)) return false;
  for (int r = 0; r < v.s; ++r) {
    int ones = 0;
    for (int c = 0; c < v.l; ++c) {
      const auto x = v.at(r, c);
      if (x > 1) return false;
      ones += x;
    }
    if (ones > 1) return false;
  }
  return true;
}

}  // namespace fused
