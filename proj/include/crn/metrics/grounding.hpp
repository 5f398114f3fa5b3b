#pragma once

#include "crn/agents/agent.hpp"
#include "crn/pipeline/config.hpp"
#include "crn/pipeline/manifest.hpp"
#include "crn/rulecore/rule.hpp"

#include <map>

namespace crn {

struct SplitGrounding {
  std::string split;
  std::size_t images = 0;
  double mean = 0.0;  // over (symbol, image) pairs
  std::map<std::string, double> per_symbol;
};

/// Mean verifier presence likelihood of the rule symbols.
struct GroundingReport {
  std::size_t symbols = 0;
  std::vector<SplitGrounding> splits;
};

/// Symbols are deduplicated across rules. Splits without items are left
/// out; MetricFailure when none of `splits` has items or the rule set has
/// no symbols. VerificationFailure propagates.
GroundingReport grounding_score(const RuleSet& rules, const Manifest& manifest,
                                const std::vector<std::string>& splits, const RoleBinding& verifier,
                                const PipelineConfig& config);

struct RepresentativenessReport {
  double mean = 0.0;
  std::vector<std::string> classes;  // sampled classes, in sample order
  std::map<std::string, double> per_class;
  std::size_t skipped = 0;
};

/// Asks the reasoner how well each sampled class's rule symbols predict
/// the class. Up to `max_classes` classes with rules are sampled with
/// `seed`. Unparseable replies are skipped; MetricFailure when all are.
RepresentativenessReport representativeness_score(const RuleSet& rules, const std::string& task,
                                                  const RoleBinding& reasoner, std::uint64_t seed,
                                                  std::size_t max_classes = 3);

/// Binary entropy in nats; 0 at p = 0 or 1.
double binary_entropy(double p);

struct EntropyReport {
  std::size_t symbols = 0;
  std::size_t images = 0;
  double h_s = 0.0;          // Σ h(frequency of s)
  double h_s_given_x = 0.0;  // mean over images of Σ h(p(s | x))
};

/// From a matrix of presence likelihoods, rows are images and columns
/// symbols. A symbol's frequency counts images with likelihood >= 0.5.
EntropyReport entropy_from_scores(const std::vector<std::vector<double>>& likelihoods);

/// entropy_from_scores over the verifier's answers for every rule symbol
/// on every item of `split`.
EntropyReport entropy_report(const RuleSet& rules, const Manifest& manifest, const std::string& split,
                             const RoleBinding& verifier, const PipelineConfig& config);

json grounding_to_json(const GroundingReport& r);
json representativeness_to_json(const RepresentativenessReport& r);
json entropy_to_json(const EntropyReport& r);

}  // namespace crn
