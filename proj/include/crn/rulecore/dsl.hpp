#pragma once

#include "crn/rulecore/rule.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace crn {

/// Rule text format:
///
///     <label> :- <group> ( AND <group> )*
///     <group>   := <literal> | ( <literal> OR <literal> )
///     <literal> := [NOT] <symbol text>
///
/// Keywords are case-sensitive uppercase. A symbol whose text contains
/// parentheses, quotes or backslashes is written as a double-quoted string
/// with backslash escapes.
///
/// Throws ParseError (with 1-based line/column), RuleTooLong or DuplicateSymbol.
Rule parse_rule(std::string_view text, int max_groups = kDefaultMaxRuleLength);

/// One rule per non-blank line; lines starting with '#' are comments.
std::vector<Rule> parse_rules(std::string_view text, int max_groups = kDefaultMaxRuleLength);

std::string print_rule(const Rule& rule);
/// The part right of ":-".
std::string print_body(const Rule& rule);
std::string print_literal(const Literal& lit);

}  // namespace crn
