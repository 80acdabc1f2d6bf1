#pragma once

#include <span>
#include <string>
#include <vector>

namespace jetseg {

struct PairedSample {
  std::vector<double> a;
  std::vector<double> b;
  std::string unit;
};

enum class TestMethod { Exact, NormalApproximation };

const char* to_string(TestMethod method);

struct TestResult {
  double statistic = 0.0;  // W = min(W+, W-)
  double w_plus = 0.0;
  double w_minus = 0.0;
  double p_value = 1.0;  // two-sided
  int n_effective = 0;   // pairs left after discarding zero differences
  TestMethod method = TestMethod::Exact;
  double alpha = 0.1;
  bool reject = false;   // p < alpha
};

inline constexpr int kWilcoxonExactLimit = 25;

/// Two-sided signed-rank test on d = a - b. Zero differences are discarded
/// and tied magnitudes get average ranks. Exact null distribution up to
/// kWilcoxonExactLimit pairs, normal approximation (tie-corrected variance,
/// continuity correction) above that.
TestResult wilcoxon_signed_rank(const PairedSample& s, double alpha = 0.1);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

double normal_cdf(double x);

/// Inverse standard normal CDF by bisection on normal_cdf.
double normal_quantile(double p);

struct QQPoint {
  double theoretical = 0.0;
  double sample = 0.0;
};

/// Sorted, standardized sample (sample mean, n-1 std) against normal
/// quantiles at (i - 0.5) / n.
std::vector<QQPoint> qq_points(std::span<const double> sample);

}  // namespace jetseg
