#pragma once

#include "crn/rulecore/rule.hpp"
#include "crn/util/json_io.hpp"

namespace crn {

/// {dataset, labels, class_rules:[{label, rules:[{groups:[[{symbol, negated}]],
///  entailment, provenance}]}]}. Rules are emitted in normalized order.
json ruleset_to_json(const RuleSet& rules);
/// Throws SchemaError naming the offending field.
RuleSet ruleset_from_json(const json& doc, int max_groups = kDefaultMaxRuleLength);

RuleSet load_ruleset(const std::filesystem::path& path, int max_groups = kDefaultMaxRuleLength);
void save_ruleset(const std::filesystem::path& path, const RuleSet& rules);

}  // namespace crn
