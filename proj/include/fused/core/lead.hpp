#pragma once

#include <optional>

namespace fused {

/// A leading-vehicle estimate in the ego frame: longitudinal bumper gap,
/// lateral offset (positive to the left) and relative speed (lead minus ego).
/// Only camera-sourced leads carry a confidence, in percent.
struct Lead {
  double rel_x = 0.0;
  double rel_y = 0.0;
  double rel_v = 0.0;
  std::optional<double> confidence;

  friend bool operator==(const Lead &, const Lead &) = default;
};

using MaybeLead = std::optional<Lead>;

}  // namespace fused
