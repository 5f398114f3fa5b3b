#pragma once

#include "crn/util/json_io.hpp"

#include <vector>

namespace crn {

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// Student t CDF with `df` degrees of freedom.
double student_t_cdf(double t, double df);

/// Inverse of student_t_cdf for p in (0, 1).
double student_t_quantile(double p, double df);

struct PairedTestResult {
  std::size_t n = 0;
  double mean_diff = 0.0;  // mean of a - b
  double sd = 0.0;         // sample SD of the differences
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
  double ci_low = 0.0;
  double ci_high = 0.0;  // 95%
  double cohens_d = 0.0;
};

/// Paired two-sided t-test on a - b.
/// std::invalid_argument for unequal lengths or n < 2.
/// DegenerateVariance when every difference is the same nonzero value; all
/// differences zero gives mean 0, t 0, p 1 and d 0.
PairedTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b);

json ttest_to_json(const PairedTestResult& r);

}  // namespace crn
