#pragma once

#include "crn/agents/agent.hpp"
#include "crn/pipeline/config.hpp"
#include "crn/pipeline/manifest.hpp"
#include "crn/rulecore/symbol.hpp"

namespace crn {

/// c_y: visual concepts gathered from a class's training images.
struct ConceptSet {
  std::string label;
  std::vector<SymbolAtom> concepts;  // first-appearance order, no duplicates
  std::vector<std::string> source_image_ids;
  std::size_t failures = 0;

  std::vector<std::string> names() const;
};

/// Samples min(n, available) training images of `label` with the config
/// seed, asks the visual agent for M concepts per image and unions them.
/// Failed images are skipped; StageFailure when the class has no training
/// images or more than half of the sampled images fail.
ConceptSet extract_concepts(const Manifest& manifest, const std::string& label, const PipelineConfig& config,
                            const RoleBinding& visual);

}  // namespace crn
