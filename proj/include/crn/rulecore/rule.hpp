#pragma once

#include "crn/rulecore/symbol.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crn {

inline constexpr int kDefaultMaxRuleLength = 3;
/// Mixed-normal-form groups pair a counterfactual with the original literal.
inline constexpr std::size_t kMaxGroupWidth = 2;

struct Literal {
  SymbolAtom symbol;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// A disjunction of literals. Plain rules use singleton groups.
using Group = std::vector<Literal>;

enum class Provenance { initial, explored, counterfactual };

std::string_view to_string(Provenance p);
/// Throws SchemaError for unknown names.
Provenance provenance_from_string(std::string_view s);

/// `label :- g1 AND g2 AND ...` where each group is an OR of literals.
struct Rule {
  std::string label;
  std::vector<Group> groups;
  std::optional<double> entailment;
  Provenance provenance = Provenance::explored;

  /// Distinct canonical symbols in group/literal order.
  std::vector<std::string> symbols() const;
  std::size_t literal_count() const;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Same label and same groups (order-sensitive); ignores entailment and provenance.
bool same_formula(const Rule& a, const Rule& b);

/// Checks group count, non-empty groups and symbol uniqueness.
/// Throws RuleTooLong, DuplicateSymbol or SchemaError.
void validate_rule(const Rule& rule, int max_groups = kDefaultMaxRuleLength);

/// Convenience builder for pure conjunctions.
Rule make_conjunction(std::string label, const std::vector<std::string>& symbols,
                      std::optional<double> entailment = std::nullopt,
                      Provenance provenance = Provenance::explored);

struct RuleSet {
  std::string dataset;
  std::vector<std::string> labels;
  std::vector<Rule> rules;

  bool has_label(std::string_view label) const;
  std::vector<const Rule*> rules_for(std::string_view label) const;
  /// Distinct canonical symbols over every rule, sorted.
  std::vector<std::string> symbols() const;

  /// Sorts rules by label order, then descending entailment (unset last),
  /// then printed text. Serialization relies on this order.
  void normalize();
  /// Every rule label is declared and every rule is valid.
  void validate(int max_groups = kDefaultMaxRuleLength) const;
};

/// Presence probabilities for one input, keyed by canonical symbol.
class ScoreTable {
public:
  ScoreTable() = default;
  ScoreTable(std::initializer_list<std::pair<const std::string, double>> init);

  /// Throws std::invalid_argument when p is outside [0,1] or NaN.
  void set(std::string_view symbol, double p);
  /// Throws MissingScore; never defaults.
  double at(std::string_view symbol) const;
  bool contains(std::string_view symbol) const;
  std::size_t size() const { return scores_.size(); }
  const std::map<std::string, double, std::less<>>& entries() const { return scores_; }

private:
  std::map<std::string, double, std::less<>> scores_;
};

}  // namespace crn
