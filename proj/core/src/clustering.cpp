#include "jetseg/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "jetseg/errors.hpp"
#include "jetseg/random.hpp"

namespace jetseg {

IntensityHistogram intensity_histogram(const IntensityImage& image) {
  IntensityHistogram h{};
  for (const auto v : image.values()) {
    ++h[v];
  }
  return h;
}

namespace {

constexpr double kMinVariance = 1e-12;

int distinct_values(const IntensityHistogram& h) {
  return static_cast<int>(std::count_if(h.begin(), h.end(), [](auto n) { return n > 0; }));
}

void check_cluster_count(int k, const IntensityHistogram& h) {
  if (k < 1 || k > kLabelCount) {
    throw ConfigError("cluster count must be in [1, 4], got " + std::to_string(k));
  }
  if (distinct_values(h) < k) {
    throw DegenerateError("image has fewer than " + std::to_string(k) +
                          " distinct intensities");
  }
}

int nearest(const std::vector<double>& centers, double v) {
  int best = 0;
  double best_d = std::abs(v - centers[0]);
  for (int j = 1; j < static_cast<int>(centers.size()); ++j) {
    const double d = std::abs(v - centers[static_cast<std::size_t>(j)]);
    if (d < best_d) {
      best = j;
      best_d = d;
    }
  }
  return best;
}

std::vector<double> kmeanspp_seed(const IntensityHistogram& h, int k, Rng& rng) {
  const std::uint64_t total = std::accumulate(h.begin(), h.end(), std::uint64_t{0});
  std::vector<double> centers;
  std::uint64_t pick = rng.below(total);
  for (int b = 0; b < 256; ++b) {
    if (pick < h[static_cast<std::size_t>(b)]) {
      centers.push_back(b);
      break;
    }
    pick -= h[static_cast<std::size_t>(b)];
  }
  while (static_cast<int>(centers.size()) < k) {
    std::array<double, 256> weight{};
    double sum = 0.0;
    for (int b = 0; b < 256; ++b) {
      const double d = b - centers[static_cast<std::size_t>(nearest(centers, b))];
      weight[static_cast<std::size_t>(b)] = static_cast<double>(h[static_cast<std::size_t>(b)]) * d * d;
      sum += weight[static_cast<std::size_t>(b)];
    }
    const double u = rng.uniform() * sum;
    double acc = 0.0;
    int chosen = -1;
    for (int b = 0; b < 256; ++b) {
      acc += weight[static_cast<std::size_t>(b)];
      if (weight[static_cast<std::size_t>(b)] > 0.0 && u < acc) {
        chosen = b;
        break;
      }
    }
    if (chosen < 0) {  // u landed on the rounding edge of the last bin
      for (int b = 255; b >= 0; --b) {
        if (weight[static_cast<std::size_t>(b)] > 0.0) {
          chosen = b;
          break;
        }
      }
    }
    centers.push_back(chosen);
  }
  return centers;
}

// Reorders components by ascending center; returns old index -> rank.
std::vector<int> rank_by_center(const std::vector<double>& centers) {
  std::vector<int> order(centers.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return centers[static_cast<std::size_t>(a)] < centers[static_cast<std::size_t>(b)];
  });
  std::vector<int> rank(centers.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    rank[static_cast<std::size_t>(order[r])] = static_cast<int>(r);
  }
  return rank;
}

template <typename T>
std::vector<T> permute(const std::vector<T>& values, const std::vector<int>& rank) {
  std::vector<T> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[static_cast<std::size_t>(rank[i])] = values[i];
  }
  return out;
}

LabelMask label_image(const IntensityImage& image, const std::array<std::uint8_t, 256>& lut) {
  LabelMask mask(image.rows(), image.cols());
  const auto src = image.values();
  auto dst = mask.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = lut[src[i]];
  }
  return mask;
}

struct LloydResult {
  std::vector<double> centers;
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
};

LloydResult lloyd(const IntensityHistogram& h, std::vector<double> centers,
                  const KMeansOptions& options) {
  const auto k = centers.size();
  LloydResult out;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    std::vector<double> mass(k, 0.0);
    std::vector<double> moment(k, 0.0);
    std::array<int, 256> assign{};
    for (int b = 0; b < 256; ++b) {
      if (h[static_cast<std::size_t>(b)] == 0) {
        continue;
      }
      const int j = nearest(centers, b);
      assign[static_cast<std::size_t>(b)] = j;
      mass[static_cast<std::size_t>(j)] += static_cast<double>(h[static_cast<std::size_t>(b)]);
      moment[static_cast<std::size_t>(j)] += static_cast<double>(h[static_cast<std::size_t>(b)]) * b;
    }
    double shift = 0.0;
    std::vector<double> updated = centers;
    for (std::size_t j = 0; j < k; ++j) {
      if (mass[j] > 0.0) {
        updated[j] = moment[j] / mass[j];
      }
      shift = std::max(shift, std::abs(updated[j] - centers[j]));
    }
    double inertia = 0.0;
    for (int b = 0; b < 256; ++b) {
      if (h[static_cast<std::size_t>(b)] == 0) {
        continue;
      }
      const double d = b - updated[static_cast<std::size_t>(assign[static_cast<std::size_t>(b)])];
      inertia += static_cast<double>(h[static_cast<std::size_t>(b)]) * d * d;
    }
    centers = std::move(updated);
    out.trace.push_back(inertia);
    out.iterations = iter;
    if (shift < options.epsilon) {
      out.converged = true;
      break;
    }
  }
  out.centers = std::move(centers);
  return out;
}

}  // namespace

ClusterSegmentation kmeans_segment(const IntensityImage& image, const KMeansOptions& options) {
  const auto h = intensity_histogram(image);
  check_cluster_count(options.k, h);
  if (!(options.epsilon > 0.0) || options.max_iter < 1) {
    throw ConfigError("kmeans needs epsilon > 0 and max_iter >= 1");
  }
  Rng rng(options.seed);
  auto fit = lloyd(h, kmeanspp_seed(h, options.k, rng), options);

  const auto rank = rank_by_center(fit.centers);
  ClusterModel model;
  model.k = options.k;
  model.centers = permute(fit.centers, rank);
  model.trace = std::move(fit.trace);
  model.iterations = fit.iterations;
  model.converged = fit.converged;
  model.weights.assign(static_cast<std::size_t>(options.k), 0.0);

  const double total = static_cast<double>(image.size());
  std::array<std::uint8_t, 256> lut{};
  double within = 0.0;
  for (int b = 0; b < 256; ++b) {
    const int j = nearest(model.centers, b);
    lut[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(j);
    const double n = static_cast<double>(h[static_cast<std::size_t>(b)]);
    model.weights[static_cast<std::size_t>(j)] += n / total;
    const double d = b - model.centers[static_cast<std::size_t>(j)];
    within += n * d * d;
  }
  model.variance = within / total;
  return {label_image(image, lut), std::move(model)};
}

ClusterSegmentation gmm_segment(const IntensityImage& image, const GmmOptions& options) {
  const auto h = intensity_histogram(image);
  check_cluster_count(options.components, h);
  if (options.max_iter < 1 || !(options.tol > 0.0)) {
    throw ConfigError("gmm needs max_iter >= 1 and tol > 0");
  }

  KMeansOptions km;
  km.k = options.components;
  km.seed = options.seed;
  const auto init = kmeans_segment(image, km).model;

  const auto k = static_cast<std::size_t>(options.components);
  std::vector<double> mean = init.centers;
  std::vector<double> weight = init.weights;
  double variance = init.variance;
  if (variance < kMinVariance) {
    throw DegenerateError("gmm variance collapsed at initialization");
  }

  const double total = static_cast<double>(image.size());
  std::vector<std::array<double, 256>> resp(k);
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;

  const auto e_step = [&]() {
    const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * variance);
    double ll = 0.0;
    std::vector<double> logp(k);
    for (int b = 0; b < 256; ++b) {
      const auto bi = static_cast<std::size_t>(b);
      if (h[bi] == 0) {
        continue;
      }
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < k; ++j) {
        const double d = b - mean[j];
        logp[j] = (weight[j] > 0.0 ? std::log(weight[j])
                                   : -std::numeric_limits<double>::infinity()) +
                  log_norm - d * d / (2.0 * variance);
        top = std::max(top, logp[j]);
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        sum += std::exp(logp[j] - top);
      }
      const double lse = top + std::log(sum);
      for (std::size_t j = 0; j < k; ++j) {
        resp[j][bi] = std::exp(logp[j] - lse);
      }
      ll += static_cast<double>(h[bi]) * lse;
    }
    return ll / total;
  };

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const double ll = e_step();
    iterations = iter;
    const bool done = !trace.empty() && std::abs(ll - trace.back()) < options.tol;
    trace.push_back(ll);
    if (done) {
      converged = true;
      break;
    }
    if (iter == options.max_iter) {
      break;
    }

    double pooled = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      double nk = 0.0;
      double moment = 0.0;
      for (int b = 0; b < 256; ++b) {
        const double w = static_cast<double>(h[static_cast<std::size_t>(b)]) *
                         resp[j][static_cast<std::size_t>(b)];
        nk += w;
        moment += w * b;
      }
      weight[j] = nk / total;
      if (nk > 0.0) {
        mean[j] = moment / nk;
      }
      for (int b = 0; b < 256; ++b) {
        const double d = b - mean[j];
        pooled += static_cast<double>(h[static_cast<std::size_t>(b)]) *
                  resp[j][static_cast<std::size_t>(b)] * d * d;
      }
    }
    variance = pooled / total;
    if (variance < kMinVariance) {
      throw DegenerateError("gmm tied variance collapsed below 1e-12");
    }
  }

  // resp holds the posteriors of the parameters that produced trace.back().
  const auto rank = rank_by_center(mean);
  std::array<std::uint8_t, 256> lut{};
  for (int b = 0; b < 256; ++b) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < k; ++j) {
      if (resp[j][static_cast<std::size_t>(b)] > resp[best][static_cast<std::size_t>(b)]) {
        best = j;
      }
    }
    lut[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(rank[best]);
  }

  ClusterModel model;
  model.k = options.components;
  model.centers = permute(mean, rank);
  model.weights = permute(weight, rank);
  model.variance = variance;
  model.trace = std::move(trace);
  model.iterations = iterations;
  model.converged = converged;
  return {label_image(image, lut), std::move(model)};
}

}  // namespace jetseg
