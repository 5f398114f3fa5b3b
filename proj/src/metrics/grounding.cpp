#include "crn/metrics/grounding.hpp"

#include "crn/agents/parsers.hpp"
#include "crn/agents/prompts.hpp"
#include "crn/errors.hpp"
#include "crn/pipeline/inference.hpp"
#include "crn/util/rng.hpp"

#include <spdlog/spdlog.h>

#include <cmath>

namespace crn {
namespace {

// Rows follow the sorted item ids of `split`, columns rules.symbols().
std::vector<std::vector<double>> likelihood_matrix(const RuleSet& rules, const Manifest& manifest,
                                                   const std::string& split, const RoleBinding& verifier,
                                                   const PipelineConfig& config) {
  auto items = manifest.split_items(split);
  std::sort(items.begin(), items.end(), [](const ManifestItem* a, const ManifestItem* b) { return a->id < b->id; });
  auto symbols = rules.symbols();
  std::vector<std::vector<double>> rows;
  for (const auto* item : items) {
    auto v = verify_image(manifest, *item, rules, verifier, config);
    std::vector<double> row;
    for (const auto& s : symbols) row.push_back(v.scores.at(s));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

GroundingReport grounding_score(const RuleSet& rules, const Manifest& manifest,
                                const std::vector<std::string>& splits, const RoleBinding& verifier,
                                const PipelineConfig& config) {
  auto symbols = rules.symbols();
  if (symbols.empty()) throw MetricFailure("grounding: the rule set has no symbols");
  GroundingReport r;
  r.symbols = symbols.size();
  for (const auto& split : splits) {
    auto rows = likelihood_matrix(rules, manifest, split, verifier, config);
    if (rows.empty()) continue;
    SplitGrounding g;
    g.split = split;
    g.images = rows.size();
    double total = 0.0;
    for (std::size_t j = 0; j < symbols.size(); ++j) {
      double sum = 0.0;
      for (const auto& row : rows) sum += row[j];
      g.per_symbol[symbols[j]] = sum / static_cast<double>(rows.size());
      total += sum;
    }
    g.mean = total / static_cast<double>(rows.size() * symbols.size());
    r.splits.push_back(std::move(g));
  }
  if (r.splits.empty()) throw MetricFailure("grounding: no images in the requested splits");
  return r;
}

RepresentativenessReport representativeness_score(const RuleSet& rules, const std::string& task,
                                                  const RoleBinding& reasoner, std::uint64_t seed,
                                                  std::size_t max_classes) {
  std::vector<std::string> candidates;
  for (const auto& label : rules.labels)
    if (!rules.rules_for(label).empty()) candidates.push_back(label);
  if (candidates.empty()) throw MetricFailure("representativeness: no class has rules");
  Rng rng(derive_seed(seed, "representativeness"));
  rng.shuffle(candidates);
  if (candidates.size() > max_classes) candidates.resize(max_classes);

  RepresentativenessReport r;
  r.classes = candidates;
  double sum = 0.0;
  for (const auto& label : candidates) {
    std::vector<std::string> symbols;
    for (const auto* rule : rules.rules_for(label))
      for (const auto& s : rule->symbols())
        if (std::find(symbols.begin(), symbols.end(), s) == symbols.end()) symbols.push_back(s);
    PromptBindings b;
    b.label = label;
    b.task = task;
    b.symbols = symbols;
    Stimulus st{render_prompt(TemplateId::representativeness, b)};
    try {
      double p = parse_probability(reasoner.ask(system_text(AgentRole::linguistic), st).text);
      r.per_class[label] = p;
      sum += p;
    } catch (const UnparseableReply& e) {
      spdlog::warn("representativeness for {} skipped: {}", label, e.what());
      ++r.skipped;
    }
  }
  if (r.per_class.empty()) throw MetricFailure("representativeness: every reply was unparseable");
  r.mean = sum / static_cast<double>(r.per_class.size());
  return r;
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

EntropyReport entropy_from_scores(const std::vector<std::vector<double>>& likelihoods) {
  EntropyReport r;
  r.images = likelihoods.size();
  if (likelihoods.empty()) throw MetricFailure("entropy: no images");
  r.symbols = likelihoods.front().size();
  std::vector<std::size_t> present(r.symbols, 0);
  double conditional = 0.0;
  for (const auto& row : likelihoods) {
    if (row.size() != r.symbols) throw std::invalid_argument("entropy: ragged likelihood matrix");
    for (std::size_t j = 0; j < r.symbols; ++j) {
      present[j] += row[j] >= 0.5;
      conditional += binary_entropy(row[j]);
    }
  }
  for (auto k : present) r.h_s += binary_entropy(static_cast<double>(k) / static_cast<double>(r.images));
  r.h_s_given_x = conditional / static_cast<double>(r.images);
  return r;
}

EntropyReport entropy_report(const RuleSet& rules, const Manifest& manifest, const std::string& split,
                             const RoleBinding& verifier, const PipelineConfig& config) {
  if (rules.symbols().empty()) throw MetricFailure("entropy: the rule set has no symbols");
  return entropy_from_scores(likelihood_matrix(rules, manifest, split, verifier, config));
}

json grounding_to_json(const GroundingReport& r) {
  json splits = json::array();
  for (const auto& s : r.splits)
    splits.push_back({{"split", s.split}, {"images", s.images}, {"mean", s.mean}, {"per_symbol", s.per_symbol}});
  return {{"symbols", r.symbols}, {"splits", splits}};
}

json representativeness_to_json(const RepresentativenessReport& r) {
  return {{"mean", r.mean}, {"classes", r.classes}, {"per_class", r.per_class}, {"skipped", r.skipped}};
}

json entropy_to_json(const EntropyReport& r) {
  return {{"symbols", r.symbols}, {"images", r.images}, {"h_s", r.h_s}, {"h_s_given_x", r.h_s_given_x}};
}

}  // namespace crn
