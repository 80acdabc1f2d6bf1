#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "jetseg/grid.hpp"

namespace jetseg {

/// 1-D clustering result over pixel intensities. Components are ordered by
/// ascending mean, which is also the label they map to (darkest = 0).
struct ClusterModel {
  int k = 0;
  std::vector<double> centers;   // K-means centers or GMM means
  std::vector<double> weights;   // pixel share (K-means) or mixing weights (GMM)
  double variance = 0.0;         // GMM tied variance; K-means pooled within-cluster variance
  std::vector<double> trace;     // K-means inertia or GMM mean log-likelihood, per iteration
  int iterations = 0;
  bool converged = false;
};

struct ClusterSegmentation {
  LabelMask mask;
  ClusterModel model;
};

struct KMeansOptions {
  int k = 4;
  double epsilon = 0.2;  // stop once no center moves by epsilon or more (intensity units)
  int max_iter = 300;
  std::uint64_t seed = 0;
};

/// Lloyd's algorithm on intensities with k-means++ seeding.
ClusterSegmentation kmeans_segment(const IntensityImage& image, const KMeansOptions& options = {});

struct GmmOptions {
  int components = 4;
  int max_iter = 200;
  double tol = 1e-6;  // on the change of mean per-pixel log-likelihood
  std::uint64_t seed = 0;
};

/// EM for a 1-D Gaussian mixture whose components share one variance,
/// initialized from kmeans_segment with the same seed. Pixels take the
/// component of maximum posterior.
ClusterSegmentation gmm_segment(const IntensityImage& image, const GmmOptions& options = {});

using IntensityHistogram = std::array<std::uint64_t, 256>;
IntensityHistogram intensity_histogram(const IntensityImage& image);

}  // namespace jetseg
