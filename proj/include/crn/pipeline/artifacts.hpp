#pragma once

#include "crn/pipeline/concepts.hpp"
#include "crn/pipeline/inference.hpp"
#include "crn/pipeline/symbols.hpp"

namespace crn {

json concepts_to_json(const std::string& dataset, const std::vector<ConceptSet>& sets);
std::vector<ConceptSet> concepts_from_json(const json& doc);

json symbols_to_json(const std::string& dataset, const std::vector<SymbolPool>& pools);
std::vector<SymbolPool> symbols_from_json(const json& doc);

struct PredictionSet {
  std::string dataset;
  std::string split;
  double lambda = 0.5;
  std::vector<std::string> labels;
  std::vector<Prediction> predictions;  // sorted by item id
};

json predictions_to_json(const PredictionSet& set);
PredictionSet predictions_from_json(const json& doc);

}  // namespace crn
