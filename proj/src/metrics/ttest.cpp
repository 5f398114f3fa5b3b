#include "crn/metrics/ttest.hpp"

#include "crn/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crn {
namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete_beta: bad arguments");
  if (x == 0.0 || x == 1.0) return x;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(a, b, x) / a;
  return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t_cdf: df must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
  return t >= 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("student_t_quantile: p must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  double lo = -1.0, hi = 1.0;
  while (student_t_cdf(lo, df) > p) lo *= 2.0;
  while (student_t_cdf(hi, df) < p) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++i) {
    double mid = 0.5 * (lo + hi);
    (student_t_cdf(mid, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

PairedTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired_ttest: samples differ in length");
  if (a.size() < 2) throw std::invalid_argument("paired_ttest: need at least two pairs");
  PairedTestResult r;
  r.n = a.size();
  r.df = static_cast<double>(r.n - 1);
  std::vector<double> d(r.n);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.n; ++i) sum += d[i] = a[i] - b[i];
  r.mean_diff = sum / static_cast<double>(r.n);
  double ss = 0.0;
  for (double x : d) ss += (x - r.mean_diff) * (x - r.mean_diff);
  r.sd = std::sqrt(ss / r.df);

  bool constant = true;
  for (double x : d) constant = constant && x == d[0];
  if (constant) {
    if (d[0] != 0.0) throw DegenerateVariance("paired_ttest: differences have zero variance");
    r.mean_diff = r.sd = 0.0;
    return r;
  }
  double se = r.sd / std::sqrt(static_cast<double>(r.n));
  r.t = r.mean_diff / se;
  r.p = std::min(1.0, 2.0 * student_t_cdf(-std::abs(r.t), r.df));
  double q = student_t_quantile(0.975, r.df);
  r.ci_low = r.mean_diff - q * se;
  r.ci_high = r.mean_diff + q * se;
  r.cohens_d = r.mean_diff / r.sd;
  return r;
}

json ttest_to_json(const PairedTestResult& r) {
  return json{{"n", r.n},       {"mean_diff", r.mean_diff}, {"sd", r.sd},
              {"t", r.t},       {"df", r.df},               {"p", r.p},
              {"ci95", {r.ci_low, r.ci_high}},              {"cohens_d", r.cohens_d}};
}

}  // namespace crn
