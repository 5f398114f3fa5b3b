#include "crn/pipeline/concepts.hpp"

#include "crn/agents/parsers.hpp"
#include "crn/agents/prompts.hpp"
#include "crn/errors.hpp"
#include "crn/pipeline/parallel.hpp"
#include "crn/util/rng.hpp"

#include <spdlog/spdlog.h>

#include <optional>

namespace crn {

std::vector<std::string> ConceptSet::names() const {
  std::vector<std::string> out;
  for (const auto& c : concepts) out.push_back(c.canonical());
  return out;
}

ConceptSet extract_concepts(const Manifest& manifest, const std::string& label, const PipelineConfig& config,
                            const RoleBinding& visual) {
  auto pool = manifest.items_for(label, "train");
  if (pool.empty()) throw StageFailure("class \"" + label + "\" has no training images");
  Rng rng(derive_seed(config.seed, "concepts:" + label));
  rng.shuffle(pool);
  pool.resize(std::min(pool.size(), static_cast<std::size_t>(config.images_per_class)));

  PromptBindings b;
  b.label = label;
  b.count = config.concepts_per_image;
  const auto prompt = render_prompt(TemplateId::concepts, b);
  RoleBinding agent{visual.agent, with_temperature(visual.endpoint, config.concept_temperature)};
  const auto sys = system_text(AgentRole::visual_concept);

  auto lists = parallel_map(pool.size(), config.concurrency, [&](std::size_t i) {
    std::optional<std::vector<SymbolAtom>> out;
    try {
      out = parse_concept_list(agent.ask(sys, manifest.stimulus(*pool[i], prompt)).text, config.concepts_per_image);
    } catch (const Error& e) {
      spdlog::warn("concept extraction failed for {}: {}", pool[i]->id, e.what());
    }
    return out;
  });

  ConceptSet set;
  set.label = label;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!lists[i]) {
      ++set.failures;
      continue;
    }
    set.source_image_ids.push_back(pool[i]->id);
    for (const auto& c : *lists[i])
      if (std::find(set.concepts.begin(), set.concepts.end(), c) == set.concepts.end()) set.concepts.push_back(c);
  }
  if (set.failures * 2 > pool.size())
    throw StageFailure("concept extraction failed on " + std::to_string(set.failures) + " of " +
                       std::to_string(pool.size()) + " images of \"" + label + "\"");
  if (set.concepts.empty()) throw StageFailure("no concepts extracted for \"" + label + "\"");
  return set;
}

}  // namespace crn
