#include "crn/rulecore/ruleset_json.hpp"

#include "crn/errors.hpp"

namespace crn {

json ruleset_to_json(const RuleSet& input) {
  RuleSet rs = input;
  rs.normalize();
  json class_rules = json::array();
  for (const auto& label : rs.labels) {
    json rules = json::array();
    for (const Rule* r : rs.rules_for(label)) {
      json groups = json::array();
      for (const auto& g : r->groups) {
        json lits = json::array();
        for (const auto& lit : g) {
          lits.push_back({{"symbol", lit.symbol.canonical()}, {"negated", lit.negated}});
        }
        groups.push_back(std::move(lits));
      }
      rules.push_back({{"groups", std::move(groups)},
                       {"entailment", r->entailment ? json(*r->entailment) : json(nullptr)},
                       {"provenance", std::string(to_string(r->provenance))}});
    }
    class_rules.push_back({{"label", label}, {"rules", std::move(rules)}});
  }
  return {{"dataset", rs.dataset}, {"labels", rs.labels}, {"class_rules", std::move(class_rules)}};
}

RuleSet ruleset_from_json(const json& doc, int max_groups) {
  RuleSet rs;
  rs.dataset = require_string(doc, "dataset", "");
  for (const auto& l : require_array(doc, "labels", "")) {
    if (!l.is_string()) throw SchemaError("labels: expected strings");
    rs.labels.push_back(l.get<std::string>());
  }
  const auto& class_rules = require_array(doc, "class_rules", "");
  for (std::size_t ci = 0; ci < class_rules.size(); ++ci) {
    std::string cpath = "class_rules[" + std::to_string(ci) + "]";
    const auto& entry = class_rules[ci];
    auto label = require_string(entry, "label", cpath);
    if (!rs.has_label(label)) throw SchemaError(cpath + ".label: \"" + label + "\" not in labels");
    const auto& rules = require_array(entry, "rules", cpath);
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
      std::string rpath = cpath + ".rules[" + std::to_string(ri) + "]";
      const auto& jr = rules[ri];
      Rule r;
      r.label = label;
      const auto& groups = require_array(jr, "groups", rpath);
      for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        std::string gpath = rpath + ".groups[" + std::to_string(gi) + "]";
        if (!groups[gi].is_array()) throw SchemaError(gpath + ": expected an array");
        Group g;
        for (std::size_t li = 0; li < groups[gi].size(); ++li) {
          std::string lpath = gpath + "[" + std::to_string(li) + "]";
          auto text = require_string(groups[gi][li], "symbol", lpath);
          bool negated = optional_bool(groups[gi][li], "negated", lpath, false);
          try {
            g.push_back(Literal{SymbolAtom(text), negated});
          } catch (const InvalidSymbol& e) {
            throw SchemaError(lpath + ".symbol: " + e.what());
          }
        }
        r.groups.push_back(std::move(g));
      }
      const auto& ent = require_field(jr, "entailment", rpath);
      if (ent.is_number()) {
        r.entailment = ent.get<double>();
      } else if (!ent.is_null()) {
        throw SchemaError(rpath + ".entailment: expected a number or null");
      }
      r.provenance = provenance_from_string(require_string(jr, "provenance", rpath));
      try {
        validate_rule(r, max_groups);
      } catch (const Error& e) {
        throw SchemaError(rpath + ": " + e.what());
      }
      rs.rules.push_back(std::move(r));
    }
  }
  rs.normalize();
  return rs;
}

RuleSet load_ruleset(const std::filesystem::path& path, int max_groups) {
  try {
    return ruleset_from_json(read_json_file(path), max_groups);
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void save_ruleset(const std::filesystem::path& path, const RuleSet& rules) {
  write_json_file(path, ruleset_to_json(rules));
}

}  // namespace crn
