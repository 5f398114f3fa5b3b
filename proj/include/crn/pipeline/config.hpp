#pragma once

#include "crn/util/json_io.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace crn {

/// How repeated entailment samples combine into one score.
enum class Aggregation { single, max, mean };

std::string_view to_string(Aggregation a);
Aggregation aggregation_from_string(std::string_view s);  // throws ConfigError

struct PipelineConfig {
  int concepts_per_image = 5;  // M
  int initial_symbols = 5;     // K
  int max_rule_length = 3;     // N_max
  double epsilon = 0.7;        // rules need entailment strictly above this
  int explore_iterations = 7;
  int images_per_class = 50;
  double lambda = 0.5;
  std::uint64_t seed = 0;
  /// When false, Stage 2 prompts carry no visual concepts.
  bool grounded = true;
  /// Candidate rules per class sent to entailment; 0 means unlimited.
  int candidate_budget = 64;
  Aggregation aggregation = Aggregation::single;
  int entail_samples = 1;  // used by max/mean
  double concept_temperature = 0.2;
  double init_temperature = 0.7;
  double explore_temperature = 0.7;
  double entail_temperature = 0.0;
  /// Task noun for verifier prompts; the manifest's task when empty.
  std::string task;
  /// Fraction of degraded yes/no scores above which verification fails.
  double degraded_limit = 0.5;
  double missing_token_gap = 4.6;
  /// Concurrent agent calls issued by a stage.
  int concurrency = 8;
};

/// Throws ConfigError naming the offending field.
void validate(const PipelineConfig& config);

/// Presets by dataset family: "default", "medical", "satellite", "whu",
/// "inaturalist". Throws ConfigError for unknown names.
PipelineConfig preset(std::string_view name);
std::vector<std::string> preset_names();

json config_to_json(const PipelineConfig& config);
/// Overlays `doc` on `base`; unknown keys are a SchemaError.
PipelineConfig config_from_json(const json& doc, PipelineConfig base = {});

}  // namespace crn
