#include "crn/rulecore/eval.hpp"

#include "crn/errors.hpp"

#include <algorithm>
#include <spdlog/spdlog.h>

namespace crn {

double literal_value(const Literal& lit, const ScoreTable& scores) {
  double p = scores.at(lit.symbol.canonical());
  return lit.negated ? 1.0 - p : p;
}

double eval_rule(const Rule& rule, const ScoreTable& scores) {
  double rule_value = 1.0;
  for (const auto& group : rule.groups) {
    double group_value = 0.0;
    for (const auto& lit : group) group_value = std::max(group_value, literal_value(lit, scores));
    rule_value = std::min(rule_value, group_value);
  }
  return rule_value;
}

ClassScore eval_class(const RuleSet& rules, std::string_view label, const ScoreTable& scores) {
  if (!rules.has_label(label)) throw UnknownLabel("unknown class \"" + std::string(label) + "\"");
  ClassScore out{std::string(label), 0.0, nullptr};
  for (const Rule* r : rules.rules_for(label)) {
    double v = eval_rule(*r, scores);
    if (out.winner == nullptr || v > out.score) {
      out.score = v;
      out.winner = r;
    }
  }
  if (out.winner == nullptr) spdlog::warn("class \"{}\" has no rules; scoring 0", label);
  return out;
}

std::vector<ClassScore> evaluate_classes(const RuleSet& rules, const ScoreTable& scores) {
  std::vector<ClassScore> out;
  out.reserve(rules.labels.size());
  for (const auto& label : rules.labels) out.push_back(eval_class(rules, label, scores));
  return out;
}

std::vector<double> system2_vector(const RuleSet& rules, const ScoreTable& scores, bool l1_normalize) {
  std::vector<double> out;
  for (const auto& cs : evaluate_classes(rules, scores)) out.push_back(cs.score);
  if (l1_normalize) {
    double sum = 0.0;
    for (double v : out) sum += v;
    if (sum > 0.0) {
      for (double& v : out) v /= sum;
    }
  }
  return out;
}

}  // namespace crn
