#pragma once

#include "crn/rulecore/rule.hpp"

#include <string_view>
#include <vector>

namespace crn {

// Fuzzy semantics: a literal is p (or 1-p when negated), a group is the max
// of its literals, a rule is the min of its groups, a class is the max of its
// rules.

double literal_value(const Literal& lit, const ScoreTable& scores);

/// Throws MissingScore for any symbol absent from `scores`.
double eval_rule(const Rule& rule, const ScoreTable& scores);

struct ClassScore {
  std::string label;
  double score = 0.0;
  /// First rule reaching `score`; null when the class has no rules.
  const Rule* winner = nullptr;
};

/// A class without rules scores 0 and logs a warning.
/// Throws UnknownLabel when `label` is not declared in the rule set.
ClassScore eval_class(const RuleSet& rules, std::string_view label, const ScoreTable& scores);

/// eval_class for every label, in `rules.labels` order.
std::vector<ClassScore> evaluate_classes(const RuleSet& rules, const ScoreTable& scores);

/// Raw per-label scores; optionally divided by their sum.
std::vector<double> system2_vector(const RuleSet& rules, const ScoreTable& scores,
                                   bool l1_normalize = false);

}  // namespace crn
