#pragma once

#include "crn/agents/agent.hpp"
#include "crn/rulecore/rule.hpp"
#include "crn/synthworld/world.hpp"
#include "crn/util/rng.hpp"

#include <optional>

namespace crn {

/// Verifier probability for `symbol` on `image`: the image's evidence plus
/// uniform noise of half-width sigma, clamped to [0,1]. Symbols unknown to
/// the world are absent and get evidence drawn from [0, sigma].
double oracle_verifier(const World& world, const SynthImage& image, const std::string& symbol, Rng& rng);

struct Proposal {
  std::string symbol;
  bool hallucinated = false;
};

/// One exploration proposal for `label`. Hallucinates a distractor with
/// probability eta_grounded when `concepts` is given, eta_ungrounded
/// otherwise; true proposals prefer symbols among `concepts` with
/// probability concept_bias. `exclude` is never proposed when avoidable.
Proposal oracle_linguistic(const World& world, const std::string& label,
                           const std::optional<std::vector<std::string>>& concepts, const std::string& exclude,
                           Rng& rng);

/// How plausible the oracle reasoner finds `symbol` as evidence for `label`.
double oracle_plausibility(const World& world, const std::string& label, const std::string& symbol,
                           const std::optional<std::vector<std::string>>& concepts);

/// Answers every agent role from ground truth. Reads the request from the
/// rendered prompt text, so it is interchangeable with a real endpoint.
/// Randomness is keyed on the request, never on call order.
class OracleAgent final : public Agent {
public:
  explicit OracleAgent(World world) : world_(std::move(world)) {}

  const World& world() const { return world_; }

private:
  AgentReply do_complete(const AgentEndpoint& ep, std::string_view system_text,
                         const Stimulus& stimulus) override;

  AgentReply concepts_reply(const Stimulus& s, Rng& rng) const;
  AgentReply linguistic_reply(const Stimulus& s, Rng& rng) const;
  AgentReply verifier_reply(const Stimulus& s, Rng& rng) const;
  AgentReply system1_reply(const Stimulus& s) const;

  World world_;
};

/// Fraction of literal occurrences whose symbol is outside the rule's class
/// vocabulary (core plus shared). Negated literals name other classes'
/// symbols by construction and count only when no class owns them.
/// Throws MetricFailure for a rule set without literals.
double hallucination_rate(const RuleSet& rules, const World& world);

}  // namespace crn
