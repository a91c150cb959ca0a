#pragma once

#include <cmath>

#include "fused/core/errors.hpp"
#include "fused/core/lead.hpp"

namespace fused {

struct DistThresholds {
  double th_x = 4.0;  // m
  double th_y = 1.0;  // m
  double th_v = 2.5;  // m/s

  void validate() const {
    if (!(th_x > 0 && th_y > 0 && th_v > 0))
      throw ConfigError("thresholds.th_x/th_y/th_v must all be > 0");
  }
  friend bool operator==(const DistThresholds &, const DistThresholds &) = default;
};

inline constexpr int kMaxDist = 3;

/// Number of lead dimensions (x, y, v) whose difference exceeds its
/// threshold. A missing lead against a present one violates all three.
inline int dist(const MaybeLead &a, const MaybeLead &b, const DistThresholds &th = {}) {
  if (!a && !b) return 0;
  if (!a || !b) return kMaxDist;
  return static_cast<int>(std::abs(a->rel_x - b->rel_x) > th.th_x) +
         static_cast<int>(std::abs(a->rel_y - b->rel_y) > th.th_y) +
         static_cast<int>(std::abs(a->rel_v - b->rel_v) > th.th_v);
}

inline double l1_residual(const Lead &a, const Lead &b) {
  return std::abs(a.rel_x - b.rel_x) + std::abs(a.rel_y - b.rel_y) +
         std::abs(a.rel_v - b.rel_v);
}

}  // namespace fused
