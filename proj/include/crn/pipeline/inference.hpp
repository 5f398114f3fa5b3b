#pragma once

#include "crn/agents/agent.hpp"
#include "crn/pipeline/config.hpp"
#include "crn/pipeline/manifest.hpp"
#include "crn/rulecore/eval.hpp"

#include <map>

namespace crn {

/// Yes-probability for one yes/no reply. Replies without usable yes/no
/// alternatives fall back to the reply text and are flagged degraded.
struct YesNoOutcome {
  double p = 0.5;
  bool degraded = false;
};
YesNoOutcome read_yes_no(const AgentReply& reply, double missing_gap);

struct Verification {
  ScoreTable scores;
  std::vector<ClassScore> classes;  // labels order
  std::vector<double> s2;
  std::size_t calls = 0;
  std::size_t degraded = 0;
};

/// One verifier call per distinct canonical symbol of `rules`.
/// VerificationFailure when more than config.degraded_limit of them degrade.
Verification verify_image(const Manifest& manifest, const ManifestItem& item, const RuleSet& rules,
                          const RoleBinding& verifier, const PipelineConfig& config);

/// Yes-probability per label from the verifier-style prompt on the class
/// name, L1-normalized (uniform if all zero).
std::vector<double> classify_system1(const Manifest& manifest, const ManifestItem& item,
                                     const std::vector<std::string>& labels, const RoleBinding& system1,
                                     const PipelineConfig& config);

struct Prediction {
  std::string item_id;
  std::string truth;  // empty when unknown
  std::vector<std::string> labels;
  std::vector<double> s1;
  std::vector<double> s2;
  std::vector<double> fused;
  std::string argmax;
  std::map<std::string, std::string> winning_rules;  // label -> printed rule
  std::size_t degraded = 0;
};

/// (1 - lambda) * s1 + lambda * s2, argmax with ties to the smallest label.
/// Throws std::invalid_argument on length mismatch, lambda outside [0,1] or
/// s1 not summing to 1 within 1e-6.
Prediction fuse(const std::vector<std::string>& labels, const std::vector<double>& s1, const std::vector<double>& s2,
                double lambda);

/// Index of the maximum, ties to the smallest label.
std::size_t argmax_label(const std::vector<std::string>& labels, const std::vector<double>& v);

/// Verification, System-1 and fusion for every item of `split`.
std::vector<Prediction> infer_split(const Manifest& manifest, std::string_view split, const RuleSet& rules,
                                    const RoleBinding& verifier, const RoleBinding& system1,
                                    const PipelineConfig& config);

/// Re-fuses stored predictions with another lambda.
Prediction refuse(const Prediction& p, double lambda);

}  // namespace crn
