#include "crn/pipeline/config.hpp"

#include "crn/errors.hpp"

#include <set>

namespace crn {
namespace {

template <typename T>
void read_opt(const json& doc, const char* key, T& out) {
  auto it = doc.find(key);
  if (it == doc.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string("config.") + key + ": wrong type");
  }
}

}  // namespace

std::string_view to_string(Aggregation a) {
  switch (a) {
    case Aggregation::single: return "single";
    case Aggregation::max: return "max";
    case Aggregation::mean: return "mean";
  }
  return "single";
}

Aggregation aggregation_from_string(std::string_view s) {
  if (s == "single") return Aggregation::single;
  if (s == "max") return Aggregation::max;
  if (s == "mean") return Aggregation::mean;
  throw ConfigError("aggregation must be single, max or mean, got \"" + std::string(s) + "\"");
}

void validate(const PipelineConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError("config: " + m); };
  if (c.concepts_per_image < 1) fail("concepts_per_image must be >= 1");
  if (c.initial_symbols < 1) fail("initial_symbols must be >= 1");
  if (c.max_rule_length < 1) fail("max_rule_length must be >= 1");
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) fail("epsilon must lie in (0,1)");
  if (c.explore_iterations < 1) fail("explore_iterations must be >= 1");
  if (c.images_per_class < 1) fail("images_per_class must be >= 1");
  if (!(c.lambda >= 0.0 && c.lambda <= 1.0)) fail("lambda must lie in [0,1]");
  if (c.candidate_budget < 0) fail("candidate_budget must be >= 0");
  if (c.entail_samples < 1) fail("entail_samples must be >= 1");
  for (double t : {c.concept_temperature, c.init_temperature, c.explore_temperature, c.entail_temperature})
    if (!(t >= 0.0)) fail("temperatures must be >= 0");
  if (!(c.degraded_limit >= 0.0 && c.degraded_limit <= 1.0)) fail("degraded_limit must lie in [0,1]");
  if (!(c.missing_token_gap > 0.0)) fail("missing_token_gap must be > 0");
  if (c.concurrency < 1) fail("concurrency must be >= 1");
}

std::vector<std::string> preset_names() { return {"default", "medical", "satellite", "whu", "inaturalist"}; }

PipelineConfig preset(std::string_view name) {
  PipelineConfig c;
  if (name == "default") return c;
  if (name == "medical") {
    c.lambda = 0.5;
    c.explore_iterations = 10;
    return c;
  }
  if (name == "satellite" || name == "inaturalist") {
    c.lambda = 0.7;
    return c;
  }
  if (name == "whu") {
    c.lambda = 0.5;
    return c;
  }
  throw ConfigError("unknown preset \"" + std::string(name) + "\"");
}

json config_to_json(const PipelineConfig& c) {
  return json{{"concepts_per_image", c.concepts_per_image},
              {"initial_symbols", c.initial_symbols},
              {"max_rule_length", c.max_rule_length},
              {"epsilon", c.epsilon},
              {"explore_iterations", c.explore_iterations},
              {"images_per_class", c.images_per_class},
              {"lambda", c.lambda},
              {"seed", c.seed},
              {"grounded", c.grounded},
              {"candidate_budget", c.candidate_budget},
              {"aggregation", std::string(to_string(c.aggregation))},
              {"entail_samples", c.entail_samples},
              {"concept_temperature", c.concept_temperature},
              {"init_temperature", c.init_temperature},
              {"explore_temperature", c.explore_temperature},
              {"entail_temperature", c.entail_temperature},
              {"task", c.task},
              {"degraded_limit", c.degraded_limit},
              {"missing_token_gap", c.missing_token_gap},
              {"concurrency", c.concurrency}};
}

PipelineConfig config_from_json(const json& doc, PipelineConfig c) {
  if (!doc.is_object()) throw SchemaError("config: expected an object");
  static const std::set<std::string> keys = {
      "concepts_per_image", "initial_symbols",   "max_rule_length",     "epsilon",
      "explore_iterations", "images_per_class",  "lambda",              "seed",
      "grounded",           "candidate_budget",  "aggregation",         "entail_samples",
      "concept_temperature", "init_temperature", "explore_temperature", "entail_temperature",
      "task",               "degraded_limit",    "missing_token_gap",   "concurrency"};
  for (const auto& [key, _] : doc.items())
    if (!keys.count(key)) throw SchemaError("config." + key + ": unknown field");
  read_opt(doc, "concepts_per_image", c.concepts_per_image);
  read_opt(doc, "initial_symbols", c.initial_symbols);
  read_opt(doc, "max_rule_length", c.max_rule_length);
  read_opt(doc, "epsilon", c.epsilon);
  read_opt(doc, "explore_iterations", c.explore_iterations);
  read_opt(doc, "images_per_class", c.images_per_class);
  read_opt(doc, "lambda", c.lambda);
  read_opt(doc, "seed", c.seed);
  read_opt(doc, "grounded", c.grounded);
  read_opt(doc, "candidate_budget", c.candidate_budget);
  if (doc.contains("aggregation")) {
    std::string a;
    read_opt(doc, "aggregation", a);
    c.aggregation = aggregation_from_string(a);
  }
  read_opt(doc, "entail_samples", c.entail_samples);
  read_opt(doc, "concept_temperature", c.concept_temperature);
  read_opt(doc, "init_temperature", c.init_temperature);
  read_opt(doc, "explore_temperature", c.explore_temperature);
  read_opt(doc, "entail_temperature", c.entail_temperature);
  read_opt(doc, "task", c.task);
  read_opt(doc, "degraded_limit", c.degraded_limit);
  read_opt(doc, "missing_token_gap", c.missing_token_gap);
  read_opt(doc, "concurrency", c.concurrency);
  return c;
}

}  // namespace crn
