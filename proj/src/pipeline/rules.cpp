#include "crn/pipeline/rules.hpp"

#include "crn/agents/parsers.hpp"
#include "crn/agents/prompts.hpp"
#include "crn/errors.hpp"
#include "crn/pipeline/parallel.hpp"
#include "crn/rulecore/dsl.hpp"
#include "crn/util/rng.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <optional>
#include <set>

namespace crn {

std::vector<std::vector<std::string>> enumerate_candidates(const std::vector<std::string>& symbols, int max_len,
                                                           int budget) {
  std::vector<std::vector<std::string>> out;
  const std::size_t n = symbols.size();
  auto full = [&] { return budget > 0 && out.size() >= static_cast<std::size_t>(budget); };
  for (int k = 1; k <= max_len && static_cast<std::size_t>(k) <= n && !full(); ++k) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    while (!full()) {
      std::vector<std::string> tuple;
      for (auto i : idx) tuple.push_back(symbols[i]);
      out.push_back(std::move(tuple));
      // next combination in lexicographic order
      std::size_t pos = idx.size();
      while (pos > 0 && idx[pos - 1] == n - idx.size() + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < idx.size(); ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

std::size_t candidate_count(std::size_t n, int max_len) {
  std::size_t total = 0, c = 1;
  for (std::size_t k = 1; k <= static_cast<std::size_t>(std::max(0, max_len)) && k <= n; ++k) {
    c = c * (n - k + 1) / k;
    total += c;
  }
  return total;
}

std::vector<Rule> form_and_filter_rules(const std::string& label, const ConceptSet& concepts,
                                        const SymbolPool& pool, const PipelineConfig& config,
                                        const RoleBinding& linguistic, RuleFormationStats* stats) {
  if (pool.symbols.empty()) throw StageFailure("no symbols to form rules for \"" + label + "\"");
  auto candidates = enumerate_candidates(pool.sorted_names(), config.max_rule_length, config.candidate_budget);
  RoleBinding agent{linguistic.agent, with_temperature(linguistic.endpoint, config.entail_temperature)};
  const auto sys = system_text(AgentRole::linguistic);
  const int samples = config.aggregation == Aggregation::single ? 1 : config.entail_samples;

  struct Scored {
    std::optional<double> score;
    std::size_t ambiguous = 0;
  };
  auto scored = parallel_map(candidates.size(), config.concurrency, [&](std::size_t i) {
    auto rule = make_conjunction(label, candidates[i]);
    PromptBindings b;
    b.label = label;
    b.rule = print_body(rule);
    if (config.grounded) b.concepts = concepts.names();
    const auto prompt = render_prompt(TemplateId::entail, b);
    Scored out;
    std::vector<double> values;
    for (int k = 0; k < samples; ++k) {
      Stimulus st{prompt};
      st.sample_index = static_cast<unsigned>(k);
      try {
        values.push_back(parse_entailment_choice(agent.ask(sys, st).text));
      } catch (const AmbiguousEntailment&) {
        ++out.ambiguous;
      } catch (const AgentError& e) {
        spdlog::warn("entailment call failed for \"{}\": {}", b.rule.value(), e.what());
        ++out.ambiguous;
      }
    }
    if (values.empty()) return out;
    if (config.aggregation == Aggregation::mean) {
      double sum = 0;
      for (double v : values) sum += v;
      out.score = sum / static_cast<double>(values.size());
    } else {
      out.score = *std::max_element(values.begin(), values.end());
    }
    return out;
  });

  std::vector<Rule> kept;
  std::size_t ambiguous = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    ambiguous += scored[i].ambiguous;
    if (!scored[i].score || !(*scored[i].score > config.epsilon)) continue;
    bool all_initial = std::all_of(candidates[i].begin(), candidates[i].end(), [&](const std::string& s) {
      return pool.origin(s) == SymbolOrigin::initial;
    });
    kept.push_back(make_conjunction(label, candidates[i], *scored[i].score,
                                    all_initial ? Provenance::initial : Provenance::explored));
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Rule& a, const Rule& b) {
    if (*a.entailment != *b.entailment) return *a.entailment > *b.entailment;
    return print_rule(a) < print_rule(b);
  });
  if (stats) {
    stats->candidates += candidates.size();
    stats->kept += kept.size();
    stats->ambiguous += ambiguous;
  }
  return kept;
}

RuleSet augment_counterfactual(const RuleSet& rules, std::uint64_t seed) {
  RuleSet out = rules;
  out.normalize();
  if (out.labels.size() < 2) {
    spdlog::warn("counterfactual augmentation needs at least two classes; rules left unchanged");
    return out;
  }
  std::map<std::string, std::set<std::string>> by_class;
  for (const auto& r : out.rules)
    for (const auto& s : r.symbols()) by_class[r.label].insert(s);

  for (auto& rule : out.rules) {
    std::set<std::string> foreign;
    for (const auto& [label, syms] : by_class)
      if (label != rule.label) foreign.insert(syms.begin(), syms.end());
    Rng rng(derive_seed(seed, "counterfactual:" + print_rule(rule)));
    bool changed = false;
    for (auto& group : rule.groups) {
      if (group.size() != 1) continue;
      auto in_rule = rule.symbols();
      std::vector<std::string> options;
      for (const auto& s : foreign)
        if (std::find(in_rule.begin(), in_rule.end(), s) == in_rule.end()) options.push_back(s);
      if (options.empty()) break;
      const auto& pick = options[static_cast<std::size_t>(rng.below(options.size()))];
      group.insert(group.begin(), Literal{SymbolAtom(pick), true});
      changed = true;
    }
    if (changed) {
      rule.provenance = Provenance::counterfactual;
    } else {
      spdlog::warn("no counterfactual symbol available for rule \"{}\"", print_rule(rule));
    }
  }
  out.normalize();
  return out;
}

}  // namespace crn
