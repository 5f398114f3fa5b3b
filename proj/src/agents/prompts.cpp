#include "crn/agents/prompts.hpp"

#include "crn/errors.hpp"

namespace crn {
namespace {

constexpr std::string_view kConcept =
    "In this picture, we see {label}. List {count} visual concepts that can be seen in relation to {label}.";
constexpr std::string_view kInitSymbols =
    "In a picture, we see {label}. List {count} entities that can be seen that verify {label}.";
constexpr std::string_view kExploreGrounded =
    "We know that for {label}, we generally observe {concepts}. Based on this, in a picture, if {symbol} "
    "AND [CONDITION] THEN {label}. What is [CONDITION]?";
constexpr std::string_view kExplore =
    "In a picture, if {symbol} AND [CONDITION] THEN {label}. What is [CONDITION]?";
constexpr std::string_view kEntailGrounded =
    "We know {concepts} is responsible for {label}. Given {rule}, how likely is {label}? Choose from the "
    "following options - (A) 0.1, (B) 0.5, (C) 0.7 (D) 0.9, (E) 0.95.";
constexpr std::string_view kEntail =
    "Given {rule}, how likely is {label}? Choose from the following options - (A) 0.1, (B) 0.5, (C) 0.7 "
    "(D) 0.9, (E) 0.95.";
constexpr std::string_view kVerify =
    "In the image we can see a {task}. Does this image show {symbol}? Answer in Yes or No.";
constexpr std::string_view kRepresentativeness =
    "How likely are {symbols} in predicting {label} for a {task}? Output only a single probability value";

template <typename T>
const T& bound(const std::optional<T>& v, const char* name) {
  if (!v) throw UnboundPlaceholder(std::string("unbound placeholder {") + name + "}");
  return *v;
}

std::string lookup(std::string_view name, const PromptBindings& b) {
  if (name == "label") return bound(b.label, "label");
  if (name == "concepts") return join_list(bound(b.concepts, "concepts"));
  if (name == "symbol") return bound(b.symbol, "symbol");
  if (name == "rule") return bound(b.rule, "rule");
  if (name == "count") return std::to_string(bound(b.count, "count"));
  if (name == "task") return bound(b.task, "task");
  if (name == "symbols") return join_list(bound(b.symbols, "symbols"));
  throw UnboundPlaceholder("unknown placeholder {" + std::string(name) + "}");
}

std::string substitute(std::string_view tmpl, const PromptBindings& b) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    auto open = tmpl.find('{', i);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(i));
      break;
    }
    auto close = tmpl.find('}', open);
    out.append(tmpl.substr(i, open - i));
    out += lookup(tmpl.substr(open + 1, close - open - 1), b);
    i = close + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(TemplateId id) {
  switch (id) {
    case TemplateId::concepts: return "concept";
    case TemplateId::init_symbols: return "init_symbols";
    case TemplateId::explore: return "explore";
    case TemplateId::entail: return "entail";
    case TemplateId::verify: return "verify";
    case TemplateId::representativeness: return "representativeness";
  }
  return "concept";
}

TemplateId template_from_string(std::string_view s) {
  for (auto id : {TemplateId::concepts, TemplateId::init_symbols, TemplateId::explore, TemplateId::entail,
                  TemplateId::verify, TemplateId::representativeness}) {
    if (to_string(id) == s) return id;
  }
  throw ConfigError("unknown template \"" + std::string(s) + "\"");
}

std::string_view template_text(TemplateId id, bool grounded) {
  switch (id) {
    case TemplateId::concepts: return kConcept;
    case TemplateId::init_symbols: return kInitSymbols;
    case TemplateId::explore: return grounded ? kExploreGrounded : kExplore;
    case TemplateId::entail: return grounded ? kEntailGrounded : kEntail;
    case TemplateId::verify: return kVerify;
    case TemplateId::representativeness: return kRepresentativeness;
  }
  return kConcept;
}

std::string render_prompt(TemplateId id, const PromptBindings& bindings) {
  return substitute(template_text(id, bindings.concepts.has_value()), bindings);
}

std::string_view system_text(AgentRole role) {
  switch (role) {
    case AgentRole::visual_concept:
      return "You describe images. Answer with a numbered list of short visual concepts.";
    case AgentRole::linguistic:
      return "You are a careful reasoner about visual classification rules. Answer briefly.";
    case AgentRole::verifier:
    case AgentRole::system1:
      return "You answer questions about images with a single word: Yes or No.";
  }
  return "";
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

}  // namespace crn
