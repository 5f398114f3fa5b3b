#pragma once

#include "crn/pipeline/config.hpp"
#include "crn/synthworld/world.hpp"

namespace crn {

struct LengthSweepPoint {
  int max_rule_length = 0;
  std::size_t rules = 0;
  /// Entailment calls spent forming rules at this length.
  std::size_t formation_calls = 0;
  /// Formation plus test-split inference calls.
  std::size_t total_calls = 0;
  double accuracy = 0.0;
  double seconds = 0.0;
};

/// Builds concepts and symbol pools once on a synthworld, then reruns rule
/// formation and test inference for each maximum rule length.
std::vector<LengthSweepPoint> rule_length_sweep(const WorldSpec& spec, const PipelineConfig& config,
                                                const std::vector<int>& lengths);

json sweep_to_json(const std::vector<LengthSweepPoint>& points, bool timing);
/// "max_rule_length,rules,formation_calls,total_calls,accuracy[,seconds]" rows.
std::string sweep_to_csv(const std::vector<LengthSweepPoint>& points, bool timing);

}  // namespace crn
