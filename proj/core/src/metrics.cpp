#include "jetseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jetseg/errors.hpp"
#include "jetseg/random.hpp"

namespace jetseg {

namespace {

std::int64_t squared_distance(const Pixel& a, const Pixel& b) {
  const std::int64_t dr = a.row - b.row;
  const std::int64_t dc = a.col - b.col;
  return dr * dr + dc * dc;
}

void require_non_empty(const PointSet& a, const PointSet& b) {
  if (a.empty() || b.empty()) {
    throw EmptySetError("Hausdorff distance needs two non-empty point sets");
  }
}

// Early-break directed distance: points of `from` are visited in a shuffled
// order, and the inner scan stops as soon as it finds a point closer than
// the running maximum, since such an `a` cannot raise the result.
std::int64_t directed_squared(const PointSet& from, const PointSet& to, Rng& rng) {
  std::vector<std::size_t> order_a(from.size());
  std::iota(order_a.begin(), order_a.end(), std::size_t{0});
  std::vector<std::size_t> order_b(to.size());
  std::iota(order_b.begin(), order_b.end(), std::size_t{0});
  for (std::size_t i = order_a.size(); i > 1; --i) {
    std::swap(order_a[i - 1], order_a[rng.below(i)]);
  }
  for (std::size_t i = order_b.size(); i > 1; --i) {
    std::swap(order_b[i - 1], order_b[rng.below(i)]);
  }
  std::int64_t cmax = 0;
  for (const auto ia : order_a) {
    std::int64_t cmin = INT64_MAX;
    bool pruned = false;
    for (const auto ib : order_b) {
      const auto d = squared_distance(from[ia], to[ib]);
      if (d < cmax) {
        pruned = true;
        break;
      }
      cmin = std::min(cmin, d);
    }
    if (!pruned && cmin > cmax) {
      cmax = cmin;
    }
  }
  return cmax;
}

// Felzenszwalb-Huttenlocher 1-D lower envelope of parabolas, exact in int64.
void edt_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& d,
            std::vector<int>& v, std::vector<double>& z) {
  constexpr std::int64_t kInf = std::int64_t{1} << 60;
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[static_cast<std::size_t>(q)] >= kInf) {
      continue;
    }
    while (k >= 0) {
      const int p = v[static_cast<std::size_t>(k)];
      const double s = (static_cast<double>(f[static_cast<std::size_t>(q)] + std::int64_t{q} * q) -
                        static_cast<double>(f[static_cast<std::size_t>(p)] + std::int64_t{p} * p)) /
                       (2.0 * (q - p));
      if (s <= z[static_cast<std::size_t>(k)]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] =
        k == 0 ? -1e300
               : (static_cast<double>(f[static_cast<std::size_t>(q)] + std::int64_t{q} * q) -
                  static_cast<double>(f[static_cast<std::size_t>(v[static_cast<std::size_t>(k - 1)])] +
                                      std::int64_t{v[static_cast<std::size_t>(k - 1)]} *
                                          v[static_cast<std::size_t>(k - 1)])) /
                     (2.0 * (q - v[static_cast<std::size_t>(k - 1)]));
  }
  if (k < 0) {
    std::fill(d.begin(), d.end(), kInf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (j < k && z[static_cast<std::size_t>(j + 1)] < q) {
      ++j;
    }
    const int p = v[static_cast<std::size_t>(j)];
    d[static_cast<std::size_t>(q)] = std::int64_t{q - p} * (q - p) + f[static_cast<std::size_t>(p)];
  }
}

// Squared distance from every pixel to the nearest set pixel of `mask`.
Grid<std::int64_t, struct DistanceTag> squared_distance_transform(const BinaryMask& mask) {
  constexpr std::int64_t kInf = std::int64_t{1} << 60;
  const int rows = mask.rows();
  const int cols = mask.cols();
  Grid<std::int64_t, DistanceTag> dist(rows, cols, kInf);
  const int n = std::max(rows, cols);
  std::vector<std::int64_t> f(static_cast<std::size_t>(n));
  std::vector<std::int64_t> d(static_cast<std::size_t>(n));
  std::vector<int> v(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) + 1);

  for (int c = 0; c < cols; ++c) {
    f.resize(static_cast<std::size_t>(rows));
    d.resize(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
      f[static_cast<std::size_t>(r)] = mask(r, c) ? 0 : kInf;
    }
    edt_1d(f, d, v, z);
    for (int r = 0; r < rows; ++r) {
      dist(r, c) = d[static_cast<std::size_t>(r)];
    }
  }
  for (int r = 0; r < rows; ++r) {
    f.resize(static_cast<std::size_t>(cols));
    d.resize(static_cast<std::size_t>(cols));
    for (int c = 0; c < cols; ++c) {
      f[static_cast<std::size_t>(c)] = dist(r, c);
    }
    edt_1d(f, d, v, z);
    for (int c = 0; c < cols; ++c) {
      dist(r, c) = d[static_cast<std::size_t>(c)];
    }
  }
  return dist;
}

std::int64_t directed_squared(const BinaryMask& from, const BinaryMask& to) {
  const auto dist = squared_distance_transform(to);
  const auto src = from.values();
  const auto dv = dist.values();
  std::int64_t out = 0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i]) {
      out = std::max(out, dv[i]);
    }
  }
  return out;
}

BinaryMask class_mask(const LabelMask& mask, std::uint8_t label, bool& any) {
  BinaryMask out(mask.rows(), mask.cols());
  const auto src = mask.values();
  auto dst = out.values();
  any = false;
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = src[i] == label ? 1 : 0;
    any = any || dst[i];
  }
  return out;
}

void require_same_shape(const LabelMask& a, const LabelMask& b) {
  if (!a.same_shape(b)) {
    throw ShapeError("masks differ in shape: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
}

}  // namespace

double directed_hausdorff(const PointSet& a, const PointSet& b) {
  require_non_empty(a, b);
  Rng rng(0x9E3779B97F4A7C15ULL);
  return std::sqrt(static_cast<double>(directed_squared(a, b, rng)));
}

double hausdorff(const PointSet& a, const PointSet& b) {
  require_non_empty(a, b);
  Rng rng(0x9E3779B97F4A7C15ULL);
  const auto ab = directed_squared(a, b, rng);
  const auto ba = directed_squared(b, a, rng);
  return std::sqrt(static_cast<double>(std::max(ab, ba)));
}

double hausdorff(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b)) {
    throw ShapeError("masks differ in shape");
  }
  const auto has_any = [](const BinaryMask& m) {
    return std::any_of(m.values().begin(), m.values().end(), [](auto v) { return v != 0; });
  };
  if (!has_any(a) || !has_any(b)) {
    throw EmptySetError("Hausdorff distance needs two non-empty masks");
  }
  return std::sqrt(static_cast<double>(std::max(directed_squared(a, b), directed_squared(b, a))));
}

PointSet class_points(const LabelMask& mask, std::uint8_t label) {
  PointSet out;
  for (int r = 0; r < mask.rows(); ++r) {
    for (int c = 0; c < mask.cols(); ++c) {
      if (mask(r, c) == label) {
        out.push_back({r, c});
      }
    }
  }
  return out;
}

double multiclass_hausdorff(const LabelMask& pred, const LabelMask& truth) {
  require_same_shape(pred, truth);
  const double diagonal = std::hypot(static_cast<double>(pred.rows()), static_cast<double>(pred.cols()));
  double sum = 0.0;
  int classes = 0;
  for (std::uint8_t k = kOuter; k <= kCentral; ++k) {
    bool in_pred = false;
    bool in_truth = false;
    const auto p = class_mask(pred, k, in_pred);
    const auto t = class_mask(truth, k, in_truth);
    if (!in_pred && !in_truth) {
      continue;
    }
    sum += (in_pred && in_truth) ? hausdorff(p, t) : diagonal;
    ++classes;
  }
  if (classes == 0) {
    throw EmptySetError("no zone class present in either mask");
  }
  return sum / classes;
}

std::int64_t ConfusionCounts::total() const {
  std::int64_t t = 0;
  for (const auto& row : counts) {
    for (const auto v : row) {
      t += v;
    }
  }
  return t;
}

std::int64_t ConfusionCounts::truth_total(int label) const {
  const auto& row = counts[static_cast<std::size_t>(label)];
  return std::accumulate(row.begin(), row.end(), std::int64_t{0});
}

std::int64_t ConfusionCounts::pred_total(int label) const {
  std::int64_t t = 0;
  for (const auto& row : counts) {
    t += row[static_cast<std::size_t>(label)];
  }
  return t;
}

ConfusionCounts confusion(const LabelMask& pred, const LabelMask& truth) {
  require_same_shape(pred, truth);
  ConfusionCounts c;
  const auto p = pred.values();
  const auto t = truth.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= kLabelCount || t[i] >= kLabelCount) {
      throw LabelError("label outside {0,1,2,3}");
    }
    ++c.counts[t[i]][p[i]];
  }
  return c;
}

namespace {
double pairs(double n) { return n * (n - 1.0) / 2.0; }
}  // namespace

OverlapMetrics overlap_metrics(const ConfusionCounts& c) {
  const auto total = c.total();
  if (total <= 0) {
    throw EmptySetError("confusion table is empty");
  }
  const double n = static_cast<double>(total);
  OverlapMetrics m;

  double j_sum = 0.0;
  double f_sum = 0.0;
  int present = 0;
  for (int k = 0; k < kLabelCount; ++k) {
    const auto denom = c.tp(k) + c.fp(k) + c.fn(k);
    if (denom == 0) {
      continue;
    }
    const double j = static_cast<double>(c.tp(k)) / static_cast<double>(denom);
    m.class_jaccard[static_cast<std::size_t>(k)] = j;
    j_sum += j;
    f_sum += 2.0 * j / (1.0 + j);
    ++present;
  }
  m.mean_jaccard = j_sum / present;
  m.f_measure = f_sum / present;

  double agree = 0.0;
  double chance = 0.0;
  for (int k = 0; k < kLabelCount; ++k) {
    agree += static_cast<double>(c.tp(k));
    chance += static_cast<double>(c.truth_total(k)) * static_cast<double>(c.pred_total(k));
  }
  const double p_o = agree / n;
  const double p_e = chance / (n * n);
  m.kappa = p_e == 1.0 ? 1.0 : (p_o - p_e) / (1.0 - p_e);

  double index = 0.0;
  double sum_truth = 0.0;
  double sum_pred = 0.0;
  for (int i = 0; i < kLabelCount; ++i) {
    for (int j = 0; j < kLabelCount; ++j) {
      index += pairs(static_cast<double>(c.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
    }
    sum_truth += pairs(static_cast<double>(c.truth_total(i)));
    sum_pred += pairs(static_cast<double>(c.pred_total(i)));
  }
  const double all_pairs = pairs(n);
  const double expected = all_pairs > 0.0 ? sum_truth * sum_pred / all_pairs : 0.0;
  const double max_index = 0.5 * (sum_truth + sum_pred);
  m.ari = max_index == expected ? 1.0 : (index - expected) / (max_index - expected);
  return m;
}

double mutual_information(const ConfusionCounts& c) {
  const auto total = c.total();
  if (total <= 0) {
    throw EmptySetError("confusion table is empty");
  }
  const double n = static_cast<double>(total);
  double mi = 0.0;
  for (int i = 0; i < kLabelCount; ++i) {
    const double pi = static_cast<double>(c.truth_total(i)) / n;
    for (int j = 0; j < kLabelCount; ++j) {
      const auto nij = c.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (nij == 0) {
        continue;
      }
      const double pij = static_cast<double>(nij) / n;
      const double pj = static_cast<double>(c.pred_total(j)) / n;
      mi += pij * std::log(pij / (pi * pj));
    }
  }
  return std::max(0.0, mi);
}

PixelErrors pixel_error_metrics(const LabelMask& pred, const LabelMask& truth) {
  require_same_shape(pred, truth);
  const auto p = pred.values();
  const auto t = truth.values();
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = static_cast<double>(p[i]) - static_cast<double>(t[i]);
    abs_sum += std::abs(d);
    sq_sum += d * d;
  }
  const double n = static_cast<double>(p.size());
  PixelErrors e;
  e.mae = abs_sum / n;
  e.mse = sq_sum / n;
  e.psnr = e.mse == 0.0 ? std::numeric_limits<double>::infinity()
                        : 10.0 * std::log10(9.0 / e.mse);
  return e;
}

namespace {

void check_series(const ErrorSeries& s) {
  if (s.truth.size() != s.predicted.size()) {
    throw ShapeError("error series lengths differ");
  }
  if (s.truth.empty()) {
    throw EmptySetError("error series is empty");
  }
}

void check_nonzero(const std::vector<double>& values, const char* name) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0.0) {
      throw DivisionError(std::string(name) + "[" + std::to_string(i) + "] is zero");
    }
  }
}

double mean_abs_percent(const ErrorSeries& s, const std::vector<double>& denom) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.truth.size(); ++i) {
    sum += std::abs(s.truth[i] - s.predicted[i]) / denom[i];
  }
  return sum / static_cast<double>(s.truth.size()) * 100.0;
}

double root_mean_square_percent(const ErrorSeries& s, const std::vector<double>& denom) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.truth.size(); ++i) {
    const double r = (s.truth[i] - s.predicted[i]) / denom[i];
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(s.truth.size())) * 100.0;
}

}  // namespace

double mape(const ErrorSeries& s) {
  check_series(s);
  check_nonzero(s.truth, "x");
  return mean_abs_percent(s, s.truth);
}

double rmspe(const ErrorSeries& s) {
  check_series(s);
  check_nonzero(s.predicted, "y");
  return root_mean_square_percent(s, s.predicted);
}

double mape_matched(const ErrorSeries& s) { return mape(s); }

double rmspe_matched(const ErrorSeries& s) {
  check_series(s);
  check_nonzero(s.truth, "x");
  return root_mean_square_percent(s, s.truth);
}

ImageMetrics evaluate_pair(const LabelMask& pred, const LabelMask& truth, std::string frame_id) {
  const auto table = confusion(pred, truth);
  const auto overlap = overlap_metrics(table);
  const auto pixel = pixel_error_metrics(pred, truth);
  ImageMetrics m;
  m.frame_id = std::move(frame_id);
  m.hausdorff = multiclass_hausdorff(pred, truth);
  m.mean_jaccard = overlap.mean_jaccard;
  m.f_measure = overlap.f_measure;
  m.ari = overlap.ari;
  m.mutual_information = mutual_information(table);
  m.kappa = overlap.kappa;
  m.mae = pixel.mae;
  m.mse = pixel.mse;
  m.psnr = pixel.psnr;
  return m;
}

namespace {
template <typename F>
void for_each_field(ImageMetrics& m, F&& f) {
  f(m.hausdorff);
  f(m.mean_jaccard);
  f(m.f_measure);
  f(m.ari);
  f(m.mutual_information);
  f(m.kappa);
  f(m.mae);
  f(m.mse);
  f(m.psnr);
}
}  // namespace

MetricAggregate aggregate(std::span<const ImageMetrics> rows) {
  if (rows.empty()) {
    throw EmptySetError("no metric rows to aggregate");
  }
  MetricAggregate agg;
  agg.mean.frame_id = "mean";
  agg.stddev.frame_id = "stddev";
  const double n = static_cast<double>(rows.size());

  constexpr std::size_t kFields = 9;
  std::array<double, kFields> sums{};
  for (auto row : rows) {
    std::size_t i = 0;
    for_each_field(row, [&](double& v) { sums[i++] += v; });
  }
  std::array<double, kFields> means{};
  for (std::size_t i = 0; i < kFields; ++i) {
    means[i] = sums[i] / n;
  }
  std::array<double, kFields> sq{};
  for (auto row : rows) {
    std::size_t i = 0;
    for_each_field(row, [&](double& v) {
      // inf - inf would poison the spread; identical infinities spread 0.
      const double d = (std::isinf(v) && v == means[i]) ? 0.0 : v - means[i];
      sq[i++] += d * d;
    });
  }
  std::size_t i = 0;
  for_each_field(agg.mean, [&](double& v) { v = means[i++]; });
  i = 0;
  for_each_field(agg.stddev, [&](double& v) {
    v = std::sqrt(sq[i] / n);
    ++i;
  });
  return agg;
}

}  // namespace jetseg
