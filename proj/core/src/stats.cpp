#include "jetseg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "jetseg/errors.hpp"

namespace jetseg {

const char* to_string(TestMethod method) {
  return method == TestMethod::Exact ? "exact" : "normal-approximation";
}

namespace {

// Average ranks of |d|, doubled so ties stay integral.
std::vector<std::int64_t> doubled_ranks(const std::vector<double>& magnitudes) {
  const std::size_t n = magnitudes.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return magnitudes[i] < magnitudes[j]; });
  std::vector<std::int64_t> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && magnitudes[order[j + 1]] == magnitudes[order[i]]) {
      ++j;
    }
    // ranks i+1 .. j+1 averaged, times two
    const auto doubled = static_cast<std::int64_t>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) {
      ranks[order[k]] = doubled;
    }
    i = j + 1;
  }
  return ranks;
}

// Number of sign assignments with doubled W+ equal to each value.
std::vector<std::uint64_t> signed_rank_counts(const std::vector<std::int64_t>& ranks) {
  const auto total = std::accumulate(ranks.begin(), ranks.end(), std::int64_t{0});
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(total) + 1, 0);
  counts[0] = 1;
  std::int64_t reach = 0;
  for (const auto r : ranks) {
    for (std::int64_t s = reach; s >= 0; --s) {
      counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
    }
    reach += r;
  }
  return counts;
}

}  // namespace

TestResult wilcoxon_signed_rank(const PairedSample& s, double alpha) {
  if (s.a.size() != s.b.size()) {
    throw ShapeError("paired samples differ in length");
  }
  if (s.a.empty()) {
    throw EmptySetError("paired sample is empty");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0, 1)");
  }
  std::vector<double> magnitudes;
  std::vector<bool> positive;
  for (std::size_t i = 0; i < s.a.size(); ++i) {
    const double d = s.a[i] - s.b[i];
    if (!std::isfinite(d)) {
      throw ValueError("non-finite paired difference at index " + std::to_string(i));
    }
    if (d == 0.0) {
      continue;
    }
    magnitudes.push_back(std::abs(d));
    positive.push_back(d > 0.0);
  }
  if (magnitudes.empty()) {
    throw DegenerateError("all paired differences are zero");
  }

  const auto ranks = doubled_ranks(magnitudes);
  std::int64_t plus2 = 0;
  std::int64_t total2 = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    total2 += ranks[i];
    if (positive[i]) {
      plus2 += ranks[i];
    }
  }

  TestResult r;
  r.alpha = alpha;
  r.n_effective = static_cast<int>(ranks.size());
  r.w_plus = static_cast<double>(plus2) / 2.0;
  r.w_minus = static_cast<double>(total2 - plus2) / 2.0;
  r.statistic = std::min(r.w_plus, r.w_minus);

  if (r.n_effective <= kWilcoxonExactLimit) {
    r.method = TestMethod::Exact;
    const auto counts = signed_rank_counts(ranks);
    const auto low = std::min(plus2, total2 - plus2);
    // The null distribution is symmetric, so both tails hold the same mass.
    std::uint64_t tail = 0;
    for (std::int64_t v = 0; v <= low; ++v) {
      tail += counts[static_cast<std::size_t>(v)];
    }
    r.p_value = std::min(1.0, std::ldexp(static_cast<double>(tail), 1 - r.n_effective));
  } else {
    r.method = TestMethod::NormalApproximation;
    const double n = r.n_effective;
    const double mean = n * (n + 1.0) / 4.0;
    double tie_term = 0.0;
    std::vector<std::int64_t> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) {
        ++j;
      }
      const double t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    const double z = (std::abs(r.w_plus - mean) - 0.5) / std::sqrt(var);
    r.p_value = z <= 0.0 ? 1.0 : std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  }
  r.reject = r.p_value < alpha;
  return r;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ShapeError("correlation inputs differ in length");
  }
  if (x.size() < 2) {
    throw EmptySetError("correlation needs at least two points");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DegenerateError("correlation of a constant vector");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw RangeError("normal quantile needs p in (0, 1)");
  }
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) {
      break;
    }
    if (normal_cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<QQPoint> qq_points(std::span<const double> sample) {
  if (sample.size() < 2) {
    throw EmptySetError("Q-Q points need at least two values");
  }
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  double ss = 0.0;
  for (const double v : sorted) {
    ss += (v - mean) * (v - mean);
  }
  const double sd = std::sqrt(ss / (n - 1.0));
  if (sd == 0.0) {
    throw DegenerateError("Q-Q points of a constant sample");
  }
  std::vector<QQPoint> out(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out[i].theoretical = normal_quantile((static_cast<double>(i) + 0.5) / n);
    out[i].sample = (sorted[i] - mean) / sd;
  }
  return out;
}

}  // namespace jetseg
