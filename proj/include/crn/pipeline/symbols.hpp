#pragma once

#include "crn/agents/agent.hpp"
#include "crn/pipeline/concepts.hpp"
#include "crn/rulecore/rule.hpp"

namespace crn {

enum class SymbolOrigin { initial, explored };

std::string_view to_string(SymbolOrigin o);

/// S: candidate symbols for one class, in insertion order.
struct SymbolPool {
  std::string label;
  std::vector<SymbolAtom> symbols;
  std::vector<SymbolOrigin> origins;
  std::size_t failures = 0;

  bool contains(const SymbolAtom& s) const;
  /// Appends unless already present; returns whether it was added.
  bool add(const SymbolAtom& s, SymbolOrigin origin);
  SymbolOrigin origin(const std::string& canonical) const;
  /// Canonical names, sorted.
  std::vector<std::string> sorted_names() const;
};

/// Up to K symbols from the initialization prompt. StageFailure when the
/// reply holds no usable entity.
SymbolPool init_symbols(const std::string& label, const PipelineConfig& config, const RoleBinding& linguistic);

/// `explore_iterations` rounds; each round asks for one new condition per
/// pool symbol (canonical order) and unions the answers. Concepts enter the
/// prompt only when config.grounded. StageFailure when a whole round fails.
SymbolPool explore(const std::string& label, const ConceptSet& concepts, SymbolPool pool,
                   const PipelineConfig& config, const RoleBinding& linguistic);

}  // namespace crn
