#pragma once

#include "crn/agents/endpoint.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crn {

enum class TemplateId { concepts, init_symbols, explore, entail, verify, representativeness };

std::string_view to_string(TemplateId id);
TemplateId template_from_string(std::string_view s);

/// Placeholder values. `concepts` doubles as the grounding switch: the
/// explore and entail templates drop their visual-context clause when it is
/// unset.
struct PromptBindings {
  std::optional<std::string> label;
  std::optional<std::vector<std::string>> concepts;
  std::optional<std::string> symbol;
  std::optional<std::string> rule;
  std::optional<int> count;
  std::optional<std::string> task;
  std::optional<std::vector<std::string>> symbols;
};

/// Throws UnboundPlaceholder naming the first missing placeholder.
std::string render_prompt(TemplateId id, const PromptBindings& bindings);

/// The raw template text, with {placeholders}.
std::string_view template_text(TemplateId id, bool grounded = true);

/// System turn sent alongside every prompt for a role.
std::string_view system_text(AgentRole role);

/// Items joined with ", ".
std::string join_list(const std::vector<std::string>& items);

}  // namespace crn
