#include "crn/errors.hpp"
#include "crn/synthworld/oracle_agent.hpp"

namespace crn {

double hallucination_rate(const RuleSet& rules, const World& world) {
  std::size_t total = 0, bad = 0;
  for (const auto& r : rules.rules) {
    for (const auto& g : r.groups) {
      for (const auto& lit : g) {
        ++total;
        const auto& s = lit.symbol.canonical();
        bool ok = lit.negated ? world.in_any_vocabulary(s) : world.is_true_symbol(r.label, s);
        if (!ok) ++bad;
      }
    }
  }
  if (total == 0) throw MetricFailure("hallucination rate of an empty rule set");
  return static_cast<double>(bad) / static_cast<double>(total);
}

}  // namespace crn
