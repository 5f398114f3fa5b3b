#pragma once

#include "crn/pipeline/concepts.hpp"
#include "crn/pipeline/rules.hpp"
#include "crn/pipeline/symbols.hpp"

namespace crn {

/// One binding per agent role.
struct AgentSet {
  RoleBinding visual;
  RoleBinding linguistic;
  RoleBinding verifier;
  RoleBinding system1;
};

struct RuleBuild {
  std::vector<ConceptSet> concepts;
  std::vector<SymbolPool> pools;
  RuleSet rules;
  std::vector<RuleFormationStats> stats;
};

/// Stage 1 for every class of the manifest.
std::vector<ConceptSet> extract_all_concepts(const Manifest& manifest, const PipelineConfig& config,
                                             const RoleBinding& visual);
/// Symbol initialization and exploration for every class.
std::vector<SymbolPool> build_all_pools(const Manifest& manifest, const std::vector<ConceptSet>& concepts,
                                        const PipelineConfig& config, const RoleBinding& linguistic);
/// Rule formation and filtering for every class.
RuleSet form_all_rules(const Manifest& manifest, const std::vector<ConceptSet>& concepts,
                       const std::vector<SymbolPool>& pools, const PipelineConfig& config,
                       const RoleBinding& linguistic, std::vector<RuleFormationStats>* stats = nullptr);

/// Stages 1 and 2 end to end.
RuleBuild build_rules(const Manifest& manifest, const PipelineConfig& config, const AgentSet& agents);

}  // namespace crn
