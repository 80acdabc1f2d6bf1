#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jetseg/grid.hpp"

namespace jetseg {

using PointSet = std::vector<Pixel>;

// --- spatial distance ------------------------------------------------------

/// max over a in A of min over b in B of |a - b| (Euclidean, pixels).
double directed_hausdorff(const PointSet& a, const PointSet& b);

/// Symmetric Hausdorff distance between two non-empty point sets.
/// Exact; uses randomized early-break pruning rather than the full |A||B| scan.
double hausdorff(const PointSet& a, const PointSet& b);

/// Hausdorff distance between the set pixels of two same-shape masks, via an
/// exact squared Euclidean distance transform.
double hausdorff(const BinaryMask& a, const BinaryMask& b);

/// Mean over zone labels {1,2,3} of the per-class Hausdorff distance. A class
/// present in only one mask contributes the image diagonal hypot(rows, cols).
double multiclass_hausdorff(const LabelMask& pred, const LabelMask& truth);

PointSet class_points(const LabelMask& mask, std::uint8_t label);

// --- contingency -----------------------------------------------------------

/// counts[i][j]: pixels with truth label i predicted as j.
struct ConfusionCounts {
  std::array<std::array<std::int64_t, kLabelCount>, kLabelCount> counts{};

  std::int64_t total() const;
  std::int64_t truth_total(int label) const;
  std::int64_t pred_total(int label) const;
  std::int64_t tp(int label) const { return counts[static_cast<std::size_t>(label)][static_cast<std::size_t>(label)]; }
  std::int64_t fp(int label) const { return pred_total(label) - tp(label); }
  std::int64_t fn(int label) const { return truth_total(label) - tp(label); }
  std::int64_t tn(int label) const { return total() - tp(label) - fp(label) - fn(label); }
};

ConfusionCounts confusion(const LabelMask& pred, const LabelMask& truth);

struct OverlapMetrics {
  std::array<std::optional<double>, kLabelCount> class_jaccard;  // empty: absent from both
  double mean_jaccard = 0.0;  // macro mean over present classes, background included
  double f_measure = 0.0;     // macro mean of 2J / (1 + J)
  double kappa = 0.0;
  double ari = 0.0;
};

OverlapMetrics overlap_metrics(const ConfusionCounts& c);

/// Mutual information of the truth/prediction partitions, in nats.
double mutual_information(const ConfusionCounts& c);

// --- pixel value errors ----------------------------------------------------

struct PixelErrors {
  double mae = 0.0;
  double mse = 0.0;
  double psnr = std::numeric_limits<double>::infinity();  // +inf when mse == 0
};

/// Errors over label values; PSNR = 10 log10(3^2 / MSE).
PixelErrors pixel_error_metrics(const LabelMask& pred, const LabelMask& truth);

// --- scalar feature errors -------------------------------------------------

struct ErrorSeries {
  std::vector<double> truth;      // x, ground-truth values
  std::vector<double> predicted;  // y, values from the predicted segmentation
  std::string unit;
};

/// (100/N) sum |x - y| / x.
double mape(const ErrorSeries& s);
/// 100 sqrt((1/N) sum ((x - y) / y)^2), with y as the denominator.
double rmspe(const ErrorSeries& s);
/// Same as mape: both matched variants divide by the ground truth x.
double mape_matched(const ErrorSeries& s);
/// 100 sqrt((1/N) sum ((x - y) / x)^2).
double rmspe_matched(const ErrorSeries& s);

// --- per-image report ------------------------------------------------------

struct ImageMetrics {
  std::string frame_id;
  double hausdorff = 0.0;
  double mean_jaccard = 0.0;
  double f_measure = 0.0;
  double ari = 0.0;
  double mutual_information = 0.0;
  double kappa = 0.0;
  double mae = 0.0;
  double mse = 0.0;
  double psnr = 0.0;
};

ImageMetrics evaluate_pair(const LabelMask& pred, const LabelMask& truth, std::string frame_id);

struct MetricAggregate {
  ImageMetrics mean;    // frame_id "mean"
  ImageMetrics stddev;  // frame_id "stddev", population standard deviation
};

MetricAggregate aggregate(std::span<const ImageMetrics> rows);

}  // namespace jetseg
