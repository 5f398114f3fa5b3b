#pragma once

#include "crn/metrics/ttest.hpp"

#include <filesystem>

namespace crn {

/// A paired test recomputed from a published accuracy table, next to the
/// values reported alongside it.
struct RecomputedTest {
  std::string comparison;
  std::string model;
  PairedTestResult recomputed;
  json reported;
  /// Reported fields that the recomputation does not reproduce at the
  /// reported precision.
  std::vector<std::string> mismatches;
};

/// Reads the "accuracy" and "paired_tests" sections of a published-results
/// document. SchemaError on malformed input.
std::vector<RecomputedTest> recompute_paired_tests(const json& published);

/// Markdown report: a fenced JSON block with every number, then plain-text
/// tables for the accuracy grid and the paired tests. `run` holds metrics
/// from a local run and may be null.
std::string render_report(const json& published, const json& run);

/// The default published-results file shipped with the sources.
std::filesystem::path default_published_path();

}  // namespace crn
