#pragma once

#include "crn/agents/agent.hpp"
#include "crn/pipeline/symbols.hpp"
#include "crn/rulecore/rule.hpp"

namespace crn {

/// Subsets of `symbols` (sorted, distinct) of size 1..max_len: all of
/// size 1 first, then size 2, and so on, lexicographic within a size.
/// At most `budget` tuples; 0 means no cap.
std::vector<std::vector<std::string>> enumerate_candidates(const std::vector<std::string>& symbols, int max_len,
                                                           int budget);

/// Number of subsets of size 1..max_len of n items.
std::size_t candidate_count(std::size_t n, int max_len);

struct RuleFormationStats {
  std::size_t candidates = 0;
  std::size_t kept = 0;
  std::size_t ambiguous = 0;
};

/// Scores each candidate conjunction with the entailment prompt and keeps
/// those scoring strictly above epsilon, sorted by descending entailment
/// then printed text.
std::vector<Rule> form_and_filter_rules(const std::string& label, const ConceptSet& concepts,
                                        const SymbolPool& pool, const PipelineConfig& config,
                                        const RoleBinding& linguistic, RuleFormationStats* stats = nullptr);

/// Counterfactual augmentation: every single-literal group [s] becomes
/// (NOT t OR s), t drawn uniformly from the other classes' rule symbols not
/// already in the rule. Returns the augmented rules only; the input is
/// untouched. Rules without a foreign symbol stay as they are (warning).
RuleSet augment_counterfactual(const RuleSet& rules, std::uint64_t seed);

}  // namespace crn
