#pragma once

#include "crn/pipeline/inference.hpp"
#include "crn/pipeline/manifest.hpp"

#include <utility>

namespace crn {

/// Top-1 accuracy against each prediction's stored truth.
/// MetricFailure when empty or when a prediction has no truth.
double accuracy(const std::vector<Prediction>& predictions);

/// Top-1 accuracy over the predictions for items of `split`, with the
/// truth taken from the manifest. MetricFailure when none match.
double accuracy(const std::vector<Prediction>& predictions, const Manifest& manifest, std::string_view split);

/// Accuracy after re-fusing every prediction at each lambda.
std::vector<std::pair<double, double>> lambda_sweep(const std::vector<Prediction>& predictions,
                                                    const std::vector<double>& lambdas);

}  // namespace crn
