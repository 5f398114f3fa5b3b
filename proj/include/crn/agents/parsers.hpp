#pragma once

#include "crn/rulecore/symbol.hpp"

#include <string_view>
#include <vector>

namespace crn {

/// Reads an enumerated, bulleted or line-separated (or single-line
/// comma-separated) list. Markers, markdown emphasis and trailing
/// descriptions ("x: because ...") are stripped; items are canonicalized,
/// deduplicated in order of first appearance and truncated to `max_items`.
/// Throws EmptyConceptList when nothing usable remains, including refusals.
std::vector<SymbolAtom> parse_concept_list(std::string_view text, int max_items);

/// One symbol from an exploration reply ("[CONDITION] is dark granules.").
/// Throws UnparseableReply.
SymbolAtom parse_symbol_reply(std::string_view text);

/// The option values offered by the entailment prompt.
inline constexpr double kEntailmentOptions[] = {0.1, 0.5, 0.7, 0.9, 0.95};

/// Maps option letters A..E (or the literal values) to the option value.
/// Throws AmbiguousEntailment on no match or conflicting matches.
double parse_entailment_choice(std::string_view text);

/// A single probability in [0,1]; "54%" reads as 0.54. Throws UnparseableReply.
double parse_probability(std::string_view text);

/// True for replies that decline the task instead of answering it.
bool looks_like_refusal(std::string_view text);

}  // namespace crn
