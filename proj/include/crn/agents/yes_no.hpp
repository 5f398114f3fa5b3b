#pragma once

#include "crn/agents/endpoint.hpp"

namespace crn {

/// Log-odds gap assumed for a missing yes/no alternative (~100:1).
inline constexpr double kDefaultMissingTokenGap = 4.6;

struct YesNoScore {
  double p_yes = 0.5;
  /// One of the two tokens was absent and its logprob was imputed.
  bool degraded = false;
};

/// Softmax over the best "yes" and best "no" first-token alternatives
/// (surface forms compared after trimming and case folding).
/// Throws VerifierUnusable when neither appears.
YesNoScore score_yes_no(const AgentReply& reply, double missing_gap = kDefaultMissingTokenGap);

/// Logistic of the log-odds yes - no, computed so that
/// yes_probability(a, b) + yes_probability(b, a) == 1 exactly.
double yes_probability(double logprob_yes, double logprob_no);

/// Token surface normalization used for matching ("▁Yes" -> "yes").
std::string normalize_token(std::string_view token);

}  // namespace crn
