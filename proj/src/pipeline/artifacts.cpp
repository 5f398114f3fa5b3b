#include "crn/pipeline/artifacts.hpp"

#include "crn/errors.hpp"

#include <algorithm>

namespace crn {
namespace {

std::string at(std::string_view base, std::size_t i) { return std::string(base) + "[" + std::to_string(i) + "]"; }

std::vector<double> number_list(const json& obj, std::string_view key, const std::string& path) {
  std::vector<double> out;
  const auto& arr = require_array(obj, key, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw SchemaError(at(path + "." + std::string(key), i) + ": expected a number");
    out.push_back(arr[i].get<double>());
  }
  return out;
}

std::vector<std::string> string_list(const json& obj, std::string_view key, const std::string& path) {
  std::vector<std::string> out;
  const auto& arr = require_array(obj, key, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) throw SchemaError(at(path + "." + std::string(key), i) + ": expected a string");
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

SymbolAtom symbol_at(const std::string& text, const std::string& path) {
  try {
    return SymbolAtom(text);
  } catch (const InvalidSymbol& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

}  // namespace

json concepts_to_json(const std::string& dataset, const std::vector<ConceptSet>& sets) {
  json classes = json::array();
  for (const auto& s : sets) {
    auto ids = s.source_image_ids;
    std::sort(ids.begin(), ids.end());
    classes.push_back(
        {{"label", s.label}, {"concepts", s.names()}, {"source_image_ids", ids}, {"failures", s.failures}});
  }
  return json{{"dataset", dataset}, {"classes", classes}};
}

std::vector<ConceptSet> concepts_from_json(const json& doc) {
  std::vector<ConceptSet> out;
  const auto& classes = require_array(doc, "classes", "concepts");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    auto path = at("concepts.classes", i);
    ConceptSet s;
    s.label = require_string(classes[i], "label", path);
    auto names = string_list(classes[i], "concepts", path);
    for (std::size_t k = 0; k < names.size(); ++k) {
      auto atom = symbol_at(names[k], at(path + ".concepts", k));
      if (std::find(s.concepts.begin(), s.concepts.end(), atom) == s.concepts.end()) s.concepts.push_back(atom);
    }
    if (classes[i].contains("source_image_ids")) s.source_image_ids = string_list(classes[i], "source_image_ids", path);
    if (classes[i].contains("failures"))
      s.failures = static_cast<std::size_t>(require_number(classes[i], "failures", path));
    out.push_back(std::move(s));
  }
  return out;
}

json symbols_to_json(const std::string& dataset, const std::vector<SymbolPool>& pools) {
  json classes = json::array();
  for (const auto& p : pools) {
    json syms = json::array();
    for (std::size_t i = 0; i < p.symbols.size(); ++i)
      syms.push_back({{"symbol", p.symbols[i].canonical()}, {"origin", std::string(to_string(p.origins[i]))}});
    classes.push_back({{"label", p.label}, {"symbols", syms}, {"failures", p.failures}});
  }
  return json{{"dataset", dataset}, {"classes", classes}};
}

std::vector<SymbolPool> symbols_from_json(const json& doc) {
  std::vector<SymbolPool> out;
  const auto& classes = require_array(doc, "classes", "symbols");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    auto path = at("symbols.classes", i);
    SymbolPool p;
    p.label = require_string(classes[i], "label", path);
    const auto& syms = require_array(classes[i], "symbols", path);
    for (std::size_t k = 0; k < syms.size(); ++k) {
      auto spath = at(path + ".symbols", k);
      auto origin = require_string(syms[k], "origin", spath);
      if (origin != "initial" && origin != "explored") throw SchemaError(spath + ".origin: must be initial or explored");
      p.add(symbol_at(require_string(syms[k], "symbol", spath), spath + ".symbol"),
            origin == "initial" ? SymbolOrigin::initial : SymbolOrigin::explored);
    }
    if (classes[i].contains("failures"))
      p.failures = static_cast<std::size_t>(require_number(classes[i], "failures", path));
    out.push_back(std::move(p));
  }
  return out;
}

json predictions_to_json(const PredictionSet& set) {
  auto preds = set.predictions;
  std::sort(preds.begin(), preds.end(), [](const Prediction& a, const Prediction& b) { return a.item_id < b.item_id; });
  json list = json::array();
  for (const auto& p : preds) {
    list.push_back({{"item_id", p.item_id},
                    {"label", p.truth},
                    {"s1", p.s1},
                    {"s2", p.s2},
                    {"fused", p.fused},
                    {"argmax", p.argmax},
                    {"winning_rules", p.winning_rules},
                    {"degraded", p.degraded}});
  }
  return json{{"dataset", set.dataset},
              {"split", set.split},
              {"lambda", set.lambda},
              {"labels", set.labels},
              {"predictions", list}};
}

PredictionSet predictions_from_json(const json& doc) {
  PredictionSet set;
  set.dataset = require_string(doc, "dataset", "predictions");
  set.split = require_string(doc, "split", "predictions");
  set.lambda = require_number(doc, "lambda", "predictions");
  set.labels = string_list(doc, "labels", "predictions");
  const auto& list = require_array(doc, "predictions", "predictions");
  for (std::size_t i = 0; i < list.size(); ++i) {
    auto path = at("predictions.predictions", i);
    Prediction p;
    p.labels = set.labels;
    p.item_id = require_string(list[i], "item_id", path);
    p.truth = list[i].contains("label") ? require_string(list[i], "label", path) : "";
    p.s1 = number_list(list[i], "s1", path);
    p.s2 = number_list(list[i], "s2", path);
    p.fused = number_list(list[i], "fused", path);
    p.argmax = require_string(list[i], "argmax", path);
    if (p.s1.size() != set.labels.size() || p.s2.size() != set.labels.size() || p.fused.size() != set.labels.size())
      throw SchemaError(path + ": s1, s2 and fused must have one entry per label");
    if (std::find(set.labels.begin(), set.labels.end(), p.argmax) == set.labels.end())
      throw SchemaError(path + ".argmax: unknown label \"" + p.argmax + "\"");
    if (list[i].contains("winning_rules")) {
      const auto& w = require_field(list[i], "winning_rules", path);
      if (!w.is_object()) throw SchemaError(path + ".winning_rules: expected an object");
      for (const auto& [k, v] : w.items()) {
        if (!v.is_string()) throw SchemaError(path + ".winning_rules." + k + ": expected a string");
        p.winning_rules[k] = v.get<std::string>();
      }
    }
    if (list[i].contains("degraded")) p.degraded = static_cast<std::size_t>(require_number(list[i], "degraded", path));
    set.predictions.push_back(std::move(p));
  }
  return set;
}

}  // namespace crn
