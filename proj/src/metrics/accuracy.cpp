#include "crn/metrics/accuracy.hpp"

#include "crn/errors.hpp"

#include <map>

namespace crn {

double accuracy(const std::vector<Prediction>& predictions) {
  if (predictions.empty()) throw MetricFailure("accuracy: no predictions");
  std::size_t correct = 0;
  for (const auto& p : predictions) {
    if (p.truth.empty()) throw MetricFailure("accuracy: prediction " + p.item_id + " has no label");
    correct += p.argmax == p.truth;
  }
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

double accuracy(const std::vector<Prediction>& predictions, const Manifest& manifest, std::string_view split) {
  std::map<std::string, std::string, std::less<>> truth;
  for (const auto* item : manifest.split_items(split)) truth[item->id] = item->label;
  std::size_t n = 0, correct = 0;
  for (const auto& p : predictions) {
    auto it = truth.find(p.item_id);
    if (it == truth.end()) continue;
    ++n;
    correct += p.argmax == it->second;
  }
  if (n == 0) throw MetricFailure("accuracy: no predictions for split " + std::string(split));
  return static_cast<double>(correct) / static_cast<double>(n);
}

std::vector<std::pair<double, double>> lambda_sweep(const std::vector<Prediction>& predictions,
                                                    const std::vector<double>& lambdas) {
  std::vector<std::pair<double, double>> out;
  for (double lambda : lambdas) {
    std::vector<Prediction> refused;
    refused.reserve(predictions.size());
    for (const auto& p : predictions) refused.push_back(refuse(p, lambda));
    out.emplace_back(lambda, accuracy(refused));
  }
  return out;
}

}  // namespace crn
