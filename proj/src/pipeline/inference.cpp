#include "crn/pipeline/inference.hpp"

#include "crn/agents/prompts.hpp"
#include "crn/agents/yes_no.hpp"
#include "crn/errors.hpp"
#include "crn/pipeline/parallel.hpp"
#include "crn/rulecore/dsl.hpp"

#include <cmath>
#include <stdexcept>

namespace crn {
namespace {

std::string task_of(const Manifest& manifest, const PipelineConfig& config) {
  return config.task.empty() ? manifest.task : config.task;
}

}  // namespace

YesNoOutcome read_yes_no(const AgentReply& reply, double missing_gap) {
  try {
    auto s = score_yes_no(reply, missing_gap);
    return {s.p_yes, s.degraded};
  } catch (const VerifierUnusable&) {
    auto first = normalize_token(reply.text.substr(0, reply.text.find_first_of(" \n\t,.!")));
    double sure = 1.0 / (1.0 + std::exp(-missing_gap));
    if (first == "yes") return {sure, true};
    if (first == "no") return {1.0 - sure, true};
    return {0.5, true};
  }
}

Verification verify_image(const Manifest& manifest, const ManifestItem& item, const RuleSet& rules,
                          const RoleBinding& verifier, const PipelineConfig& config) {
  auto symbols = rules.symbols();
  const auto task = task_of(manifest, config);
  const auto sys = system_text(AgentRole::verifier);
  auto outcomes = parallel_map(symbols.size(), config.concurrency, [&](std::size_t i) {
    PromptBindings b;
    b.task = task;
    b.symbol = symbols[i];
    return read_yes_no(verifier.ask(sys, manifest.stimulus(item, render_prompt(TemplateId::verify, b))),
                       config.missing_token_gap);
  });
  Verification v;
  v.calls = symbols.size();
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    v.scores.set(symbols[i], outcomes[i].p);
    v.degraded += outcomes[i].degraded;
  }
  if (!symbols.empty() &&
      static_cast<double>(v.degraded) > config.degraded_limit * static_cast<double>(symbols.size()))
    throw VerificationFailure("verifier degraded on " + std::to_string(v.degraded) + " of " +
                              std::to_string(symbols.size()) + " symbols for " + item.id);
  v.classes = evaluate_classes(rules, v.scores);
  for (const auto& c : v.classes) v.s2.push_back(c.score);
  return v;
}

std::vector<double> classify_system1(const Manifest& manifest, const ManifestItem& item,
                                     const std::vector<std::string>& labels, const RoleBinding& system1,
                                     const PipelineConfig& config) {
  if (labels.size() < 2) throw std::invalid_argument("System-1 classification needs at least two labels");
  const auto task = task_of(manifest, config);
  const auto sys = system_text(AgentRole::system1);
  auto outcomes = parallel_map(labels.size(), config.concurrency, [&](std::size_t i) {
    PromptBindings b;
    b.task = task;
    b.symbol = labels[i];
    return read_yes_no(system1.ask(sys, manifest.stimulus(item, render_prompt(TemplateId::verify, b))),
                       config.missing_token_gap);
  });
  std::size_t degraded = 0;
  double sum = 0;
  std::vector<double> v;
  for (const auto& o : outcomes) {
    degraded += o.degraded;
    sum += o.p;
    v.push_back(o.p);
  }
  if (static_cast<double>(degraded) > config.degraded_limit * static_cast<double>(labels.size()))
    throw VerificationFailure("System-1 replies degraded on " + std::to_string(degraded) + " of " +
                              std::to_string(labels.size()) + " labels for " + item.id);
  for (double& x : v) x = sum > 0 ? x / sum : 1.0 / static_cast<double>(labels.size());
  return v;
}

std::size_t argmax_label(const std::vector<std::string>& labels, const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best] || (v[i] == v[best] && labels[i] < labels[best])) best = i;
  }
  return best;
}

Prediction fuse(const std::vector<std::string>& labels, const std::vector<double>& s1, const std::vector<double>& s2,
                double lambda) {
  if (s1.size() != labels.size() || s2.size() != labels.size() || labels.empty())
    throw std::invalid_argument("fuse: s1, s2 and labels must have equal, non-zero length");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("fuse: lambda must lie in [0,1]");
  double sum = 0;
  for (double x : s1) sum += x;
  if (std::abs(sum - 1.0) > 1e-6) throw std::invalid_argument("fuse: s1 must sum to 1");
  Prediction p;
  p.labels = labels;
  p.s1 = s1;
  p.s2 = s2;
  for (std::size_t i = 0; i < labels.size(); ++i) p.fused.push_back((1.0 - lambda) * s1[i] + lambda * s2[i]);
  p.argmax = labels[argmax_label(labels, p.fused)];
  return p;
}

Prediction refuse(const Prediction& p, double lambda) {
  auto out = fuse(p.labels, p.s1, p.s2, lambda);
  out.item_id = p.item_id;
  out.truth = p.truth;
  out.winning_rules = p.winning_rules;
  out.degraded = p.degraded;
  return out;
}

std::vector<Prediction> infer_split(const Manifest& manifest, std::string_view split, const RuleSet& rules,
                                    const RoleBinding& verifier, const RoleBinding& system1,
                                    const PipelineConfig& config) {
  auto items = manifest.split_items(split);
  std::sort(items.begin(), items.end(), [](const ManifestItem* a, const ManifestItem* b) { return a->id < b->id; });
  // Items run one at a time; each item's calls already fan out.
  std::vector<Prediction> out;
  for (const auto* item : items) {
    auto v = verify_image(manifest, *item, rules, verifier, config);
    auto s1 = classify_system1(manifest, *item, rules.labels, system1, config);
    auto p = fuse(rules.labels, s1, v.s2, config.lambda);
    p.item_id = item->id;
    p.truth = item->label;
    p.degraded = v.degraded;
    for (const auto& c : v.classes) p.winning_rules[c.label] = c.winner ? print_rule(*c.winner) : "";
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace crn
