#include "crn/pipeline/stages.hpp"

#include "crn/errors.hpp"

#include <spdlog/spdlog.h>

namespace crn {
namespace {

const ConceptSet& concepts_for(const std::vector<ConceptSet>& sets, const std::string& label) {
  for (const auto& s : sets)
    if (s.label == label) return s;
  throw StageFailure("no concepts for class \"" + label + "\"");
}

const SymbolPool& pool_for(const std::vector<SymbolPool>& pools, const std::string& label) {
  for (const auto& p : pools)
    if (p.label == label) return p;
  throw StageFailure("no symbol pool for class \"" + label + "\"");
}

}  // namespace

std::vector<ConceptSet> extract_all_concepts(const Manifest& manifest, const PipelineConfig& config,
                                             const RoleBinding& visual) {
  std::vector<ConceptSet> out;
  for (const auto& label : manifest.classes) out.push_back(extract_concepts(manifest, label, config, visual));
  return out;
}

std::vector<SymbolPool> build_all_pools(const Manifest& manifest, const std::vector<ConceptSet>& concepts,
                                        const PipelineConfig& config, const RoleBinding& linguistic) {
  std::vector<SymbolPool> out;
  for (const auto& label : manifest.classes) {
    auto pool = init_symbols(label, config, linguistic);
    out.push_back(explore(label, concepts_for(concepts, label), std::move(pool), config, linguistic));
    spdlog::info("class {}: {} symbols", label, out.back().symbols.size());
  }
  return out;
}

RuleSet form_all_rules(const Manifest& manifest, const std::vector<ConceptSet>& concepts,
                       const std::vector<SymbolPool>& pools, const PipelineConfig& config,
                       const RoleBinding& linguistic, std::vector<RuleFormationStats>* stats) {
  RuleSet rs;
  rs.dataset = manifest.name;
  rs.labels = manifest.classes;
  for (const auto& label : manifest.classes) {
    RuleFormationStats st;
    auto rules =
        form_and_filter_rules(label, concepts_for(concepts, label), pool_for(pools, label), config, linguistic, &st);
    spdlog::info("class {}: kept {} of {} candidate rules", label, st.kept, st.candidates);
    rs.rules.insert(rs.rules.end(), rules.begin(), rules.end());
    if (stats) stats->push_back(st);
  }
  rs.normalize();
  return rs;
}

RuleBuild build_rules(const Manifest& manifest, const PipelineConfig& config, const AgentSet& agents) {
  validate(config);
  RuleBuild b;
  b.concepts = extract_all_concepts(manifest, config, agents.visual);
  b.pools = build_all_pools(manifest, b.concepts, config, agents.linguistic);
  b.rules = form_all_rules(manifest, b.concepts, b.pools, config, agents.linguistic, &b.stats);
  return b;
}

}  // namespace crn
