#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fused/core/errors.hpp"
#include "fused/core/lead.hpp"

namespace fused {

enum class FusionMethod { default_rule, mathworks, mathworks_plus, best_sensor };

inline std::string_view to_string(FusionMethod m) {
  switch (m) {
    case FusionMethod::default_rule: return "default";
    case FusionMethod::mathworks: return "mathworks";
    case FusionMethod::mathworks_plus: return "mathworks_plus";
    case FusionMethod::best_sensor: return "best_sensor";
  }
  return "default";
}

inline FusionMethod parse_fusion_method(std::string_view s) {
  if (s == "default") return FusionMethod::default_rule;
  if (s == "mathworks") return FusionMethod::mathworks;
  if (s == "mathworks_plus") return FusionMethod::mathworks_plus;
  if (s == "best_sensor") return FusionMethod::best_sensor;
  throw ConfigError("unknown fusion method '" + std::string(s) +
                    "' (expected default|mathworks|mathworks_plus|best_sensor)");
}

/// What one tick of fusion sees.
struct FusionInput {
  std::vector<Lead> camera_leads;
  std::vector<Lead> radar_tracks;
  double ego_speed = 0.0;
  double lane_half_width = 1.75;
  int tick = 0;
};

/// Which branch produced the output, for traces and fixture printouts.
enum class FusionDecision {
  low_speed_radar,  // DEFAULT gate 1
  low_confidence,   // DEFAULT gate 2, no lead
  radar_match,      // DEFAULT gate 3, matched radar track
  camera_only,      // DEFAULT gate 3, unmatched camera lead
  tracker,          // MATHWORKS / MATHWORKS+
  oracle,           // best-sensor
};

inline std::string_view to_string(FusionDecision d) {
  switch (d) {
    case FusionDecision::low_speed_radar: return "low_speed_radar";
    case FusionDecision::low_confidence: return "low_confidence";
    case FusionDecision::radar_match: return "radar_match";
    case FusionDecision::camera_only: return "camera_only";
    case FusionDecision::tracker: return "tracker";
    case FusionDecision::oracle: return "oracle";
  }
  return "tracker";
}

inline FusionDecision parse_fusion_decision(std::string_view s) {
  for (auto d : {FusionDecision::low_speed_radar, FusionDecision::low_confidence,
                 FusionDecision::radar_match, FusionDecision::camera_only,
                 FusionDecision::tracker, FusionDecision::oracle}) {
    if (to_string(d) == s) return d;
  }
  throw ConfigError("unknown fusion decision '" + std::string(s) + "'");
}

struct FusionOutput {
  MaybeLead primary;
  /// Second-closest lead where the method produces one; recorded, not used.
  MaybeLead secondary;
  FusionMethod method = FusionMethod::default_rule;
  FusionDecision decision = FusionDecision::low_confidence;
};

}  // namespace fused
