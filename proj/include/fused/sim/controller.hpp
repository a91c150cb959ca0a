#pragma once

#include <algorithm>

#include "fused/core/lead.hpp"

namespace fused {

/// Adaptive-cruise gap policy. Defaults: d_min 4 m, headway 1.5 s,
/// +2 / -6 m/s^2 actuation limits.
struct ControllerParams {
  double d_min = 4.0;
  double headway = 1.5;
  double max_accel = 2.0;
  double max_brake = 6.0;
  double k_speed = 0.5;  // 1/s, cruise speed error gain
  double k_gap = 0.25;   // 1/s^2, gap error gain
  double k_closing = 0.75;  // 1/s, relative speed gain

  friend bool operator==(const ControllerParams &, const ControllerParams &) = default;
};

inline double desired_gap(double ego_speed, const ControllerParams &p) {
  return p.d_min + p.headway * ego_speed;
}

/// Acceleration command in [-max_brake, max_accel]. Without a lead the ego
/// tracks target_speed; with one it takes the lower of the cruise command
/// and the gap-keeping command.
inline double ego_longitudinal_control(const MaybeLead &lead, double ego_speed,
                                       double target_speed, const ControllerParams &p = {}) {
  double a = p.k_speed * (target_speed - ego_speed);
  if (lead) {
    const double gap_error = lead->rel_x - desired_gap(ego_speed, p);
    a = std::min(a, p.k_gap * gap_error + p.k_closing * lead->rel_v);
  }
  return std::clamp(a, -p.max_brake, p.max_accel);
}

}  // namespace fused
