#pragma once

#include <span>
#include <vector>

#include "jetseg/grid.hpp"

namespace jetseg {

/// Inclusive intensity interval.
struct Band {
  int lo = 0;
  int hi = 0;

  bool contains(int v) const noexcept { return v >= lo && v <= hi; }
  bool operator==(const Band&) const = default;
};

/// One band per zone; intensities outside all three are background.
/// Defaults are the reference global-thresholding ranges.
struct ThresholdBands {
  Band outer{31, 85};
  Band middle{101, 170};
  Band central{171, 255};

  /// Throws ConfigError on out-of-range, inverted or overlapping bands.
  void validate() const;
  bool operator==(const ThresholdBands&) const = default;
};

LabelMask threshold_segment(const IntensityImage& image, const ThresholdBands& bands);

/// Median over the (2r+1)^2 window with edge replication.
IntensityImage median_filter(const IntensityImage& image, int radius);

struct AutoBandsOptions {
  int median_radius = 1;
  int smoothing_radius = 2;          // box half-width, applied twice
  double min_prominence = 0.02;      // fraction of the tallest smoothed peak
};

struct AutoBandsResult {
  ThresholdBands bands;
  bool fallback = false;       // true when the histogram did not separate 4 modes
  std::vector<int> modes;      // significant peak positions, ascending
};

/// Pools median-filtered histograms over the training images, finds the
/// significant modes and splits at the valleys between the three brightest
/// modes (the darkest remaining mode is background). With fewer than three
/// zone modes above a background mode the default bands are returned.
AutoBandsResult auto_bands(std::span<const IntensityImage> training_images,
                           const AutoBandsOptions& options = {});

}  // namespace jetseg
