#include "crn/pipeline/symbols.hpp"

#include "crn/agents/parsers.hpp"
#include "crn/agents/prompts.hpp"
#include "crn/errors.hpp"
#include "crn/pipeline/parallel.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <optional>

namespace crn {

std::string_view to_string(SymbolOrigin o) { return o == SymbolOrigin::initial ? "initial" : "explored"; }

bool SymbolPool::contains(const SymbolAtom& s) const {
  return std::find(symbols.begin(), symbols.end(), s) != symbols.end();
}

bool SymbolPool::add(const SymbolAtom& s, SymbolOrigin origin) {
  if (contains(s)) return false;
  symbols.push_back(s);
  origins.push_back(origin);
  return true;
}

SymbolOrigin SymbolPool::origin(const std::string& canonical) const {
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].canonical() == canonical) return origins[i];
  return SymbolOrigin::explored;
}

std::vector<std::string> SymbolPool::sorted_names() const {
  std::vector<std::string> out;
  for (const auto& s : symbols) out.push_back(s.canonical());
  std::sort(out.begin(), out.end());
  return out;
}

SymbolPool init_symbols(const std::string& label, const PipelineConfig& config, const RoleBinding& linguistic) {
  PromptBindings b;
  b.label = label;
  b.count = config.initial_symbols;
  RoleBinding agent{linguistic.agent, with_temperature(linguistic.endpoint, config.init_temperature)};
  SymbolPool pool;
  pool.label = label;
  try {
    auto reply = agent.ask(system_text(AgentRole::linguistic), Stimulus{render_prompt(TemplateId::init_symbols, b)});
    for (const auto& s : parse_concept_list(reply.text, config.initial_symbols)) pool.add(s, SymbolOrigin::initial);
  } catch (const EmptyConceptList& e) {
    throw StageFailure("symbol initialization for \"" + label + "\": " + e.what());
  }
  return pool;
}

SymbolPool explore(const std::string& label, const ConceptSet& concepts, SymbolPool pool,
                   const PipelineConfig& config, const RoleBinding& linguistic) {
  if (pool.symbols.empty()) throw StageFailure("cannot explore an empty pool for \"" + label + "\"");
  RoleBinding agent{linguistic.agent, with_temperature(linguistic.endpoint, config.explore_temperature)};
  const auto sys = system_text(AgentRole::linguistic);
  for (int round = 0; round < config.explore_iterations; ++round) {
    auto current = pool.sorted_names();
    auto replies = parallel_map(current.size(), config.concurrency, [&](std::size_t i) {
      PromptBindings b;
      b.label = label;
      b.symbol = current[i];
      if (config.grounded) b.concepts = concepts.names();
      Stimulus st{render_prompt(TemplateId::explore, b)};
      st.sample_index = static_cast<unsigned>(round);
      std::optional<SymbolAtom> out;
      try {
        out = parse_symbol_reply(agent.ask(sys, st).text);
      } catch (const UnparseableReply& e) {
        spdlog::debug("exploration reply for \"{}\" unusable: {}", current[i], e.what());
      } catch (const AgentError& e) {
        spdlog::warn("exploration call for \"{}\" failed: {}", current[i], e.what());
      }
      return out;
    });
    std::size_t failed = 0;
    for (const auto& r : replies) {
      if (!r) {
        ++failed;
        continue;
      }
      pool.add(*r, SymbolOrigin::explored);
    }
    pool.failures += failed;
    if (failed == replies.size())
      throw StageFailure("every exploration reply failed in round " + std::to_string(round + 1) + " for \"" +
                         label + "\"");
  }
  return pool;
}

}  // namespace crn
