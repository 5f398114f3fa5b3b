#include "crn/rulecore/rule.hpp"

#include "crn/errors.hpp"
#include "crn/rulecore/dsl.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace crn {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::initial: return "initial";
    case Provenance::explored: return "explored";
    case Provenance::counterfactual: return "counterfactual";
  }
  return "explored";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "initial") return Provenance::initial;
  if (s == "explored") return Provenance::explored;
  if (s == "counterfactual") return Provenance::counterfactual;
  throw SchemaError("provenance: unknown value \"" + std::string(s) + "\"");
}

std::vector<std::string> Rule::symbols() const {
  std::vector<std::string> out;
  for (const auto& g : groups) {
    for (const auto& lit : g) {
      if (std::find(out.begin(), out.end(), lit.symbol.canonical()) == out.end()) {
        out.push_back(lit.symbol.canonical());
      }
    }
  }
  return out;
}

std::size_t Rule::literal_count() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size();
  return n;
}

bool same_formula(const Rule& a, const Rule& b) {
  return a.label == b.label && a.groups == b.groups;
}

void validate_rule(const Rule& rule, int max_groups) {
  if (rule.label.empty()) throw SchemaError("rule label is empty");
  if (rule.label.find(":-") != std::string::npos || rule.label.find('\n') != std::string::npos) {
    throw SchemaError("rule label \"" + rule.label + "\" contains a separator");
  }
  if (rule.groups.empty()) throw SchemaError("rule \"" + rule.label + "\" has no groups");
  if (static_cast<int>(rule.groups.size()) > max_groups) {
    throw RuleTooLong("rule for \"" + rule.label + "\" has " + std::to_string(rule.groups.size()) +
                      " groups, maximum is " + std::to_string(max_groups));
  }
  std::set<std::string> seen;
  for (const auto& g : rule.groups) {
    if (g.empty()) throw SchemaError("rule \"" + rule.label + "\" has an empty group");
    if (g.size() > kMaxGroupWidth) {
      throw SchemaError("rule \"" + rule.label + "\" has a group wider than " +
                        std::to_string(kMaxGroupWidth) + " literals");
    }
    for (const auto& lit : g) {
      if (!seen.insert(lit.symbol.canonical()).second) {
        throw DuplicateSymbol("symbol \"" + lit.symbol.canonical() + "\" repeated in rule for \"" +
                              rule.label + "\"");
      }
    }
  }
  if (rule.entailment && !(*rule.entailment >= 0.0 && *rule.entailment <= 1.0)) {
    throw SchemaError("entailment must lie in [0,1]");
  }
}

Rule make_conjunction(std::string label, const std::vector<std::string>& symbols,
                      std::optional<double> entailment, Provenance provenance) {
  Rule r;
  r.label = std::move(label);
  r.entailment = entailment;
  r.provenance = provenance;
  for (const auto& s : symbols) r.groups.push_back({Literal{canonicalize(s), false}});
  return r;
}

bool RuleSet::has_label(std::string_view label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

std::vector<const Rule*> RuleSet::rules_for(std::string_view label) const {
  std::vector<const Rule*> out;
  for (const auto& r : rules) {
    if (r.label == label) out.push_back(&r);
  }
  return out;
}

std::vector<std::string> RuleSet::symbols() const {
  std::set<std::string> all;
  for (const auto& r : rules) {
    for (auto& s : r.symbols()) all.insert(std::move(s));
  }
  return {all.begin(), all.end()};
}

void RuleSet::normalize() {
  auto label_index = [this](const std::string& l) {
    return std::find(labels.begin(), labels.end(), l) - labels.begin();
  };
  std::vector<std::pair<std::string, Rule>> keyed;
  keyed.reserve(rules.size());
  for (auto& r : rules) keyed.emplace_back(print_rule(r), std::move(r));
  std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    auto la = label_index(a.second.label), lb = label_index(b.second.label);
    if (la != lb) return la < lb;
    double ea = a.second.entailment.value_or(-1.0), eb = b.second.entailment.value_or(-1.0);
    if (ea != eb) return ea > eb;
    return a.first < b.first;
  });
  rules.clear();
  for (auto& [text, r] : keyed) rules.push_back(std::move(r));
}

void RuleSet::validate(int max_groups) const {
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw SchemaError("labels: empty class name");
    if (!seen.insert(l).second) throw SchemaError("labels: duplicate class \"" + l + "\"");
  }
  for (const auto& r : rules) {
    if (!has_label(r.label)) throw UnknownLabel("rule label \"" + r.label + "\" not in labels");
    validate_rule(r, max_groups);
  }
}

ScoreTable::ScoreTable(std::initializer_list<std::pair<const std::string, double>> init) {
  for (const auto& [k, v] : init) set(k, v);
}

void ScoreTable::set(std::string_view symbol, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("score for \"" + std::string(symbol) + "\" outside [0,1]");
  }
  scores_.insert_or_assign(std::string(symbol), p);
}

double ScoreTable::at(std::string_view symbol) const {
  auto it = scores_.find(symbol);
  if (it == scores_.end()) throw MissingScore("no score for symbol \"" + std::string(symbol) + "\"");
  return it->second;
}

bool ScoreTable::contains(std::string_view symbol) const { return scores_.find(symbol) != scores_.end(); }

}  // namespace crn
