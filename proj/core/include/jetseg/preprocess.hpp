#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "jetseg/grid.hpp"

namespace jetseg {

/// Kelvin window mapped linearly onto 0..255.
struct IntensityRange {
  double t_min = 300.0;
  double t_max = 1300.0;
};

/// round(255 * clamp((T - t_min) / (t_max - t_min), 0, 1)), halves rounded up.
std::uint8_t kelvin_to_intensity(double kelvin, IntensityRange range);
IntensityImage to_intensity(const TemperatureField& field, IntensityRange range = {});

struct NormalizedDataset {
  std::vector<NormalizedImage> images;
  double mean = 0.0;    // of v / 255 over every pixel of every image
  double stddev = 0.0;  // population standard deviation, same population
};

/// (v / 255 - mean) / stddev with statistics pooled over the whole dataset.
/// Sums are sequential in double precision, so results are reproducible.
NormalizedDataset normalize_dataset(std::span<const IntensityImage> images);

/// v / 255 without dataset statistics.
NormalizedImage unit_scale(const IntensityImage& image);

// --- augmentation ----------------------------------------------------------

struct HFlip {};
struct Scale {
  double factor = 1.0;
};
struct Crop {
  int row = 0;
  int col = 0;
  int height = 0;
  int width = 0;
};
using AugmentOp = std::variant<HFlip, Scale, Crop>;

struct AugmentedPair {
  IntensityImage image;
  LabelMask mask;
};

/// Applies one geometric transform to an image and its mask together. The
/// image is resampled bilinearly, the mask by nearest neighbour.
AugmentedPair augment(const IntensityImage& image, const LabelMask& mask, const AugmentOp& op);

/// Draws one of flip / scale in [0.75, 1.25] / crop of >= 3/4 of each side.
AugmentOp random_augment_op(int rows, int cols, std::uint64_t seed);

AugmentedPair augment(const IntensityImage& image, const LabelMask& mask, std::uint64_t seed);

// --- class weighting -------------------------------------------------------

inline constexpr double kDefaultWeightConstant = 1.02;

struct ClassWeights {
  std::array<double, kLabelCount> weight{};      // background, outer, middle, central
  std::array<double, kLabelCount> propensity{};  // pixel share of each class
  double c = kDefaultWeightConstant;
};

/// w_k = 1 / ln(c + p_k) with p_k the share of class-k pixels over all masks.
ClassWeights compute_class_weights(std::span<const LabelMask> masks,
                                   double c = kDefaultWeightConstant);
ClassWeights class_weights_from_propensity(const std::array<double, kLabelCount>& propensity,
                                           double c = kDefaultWeightConstant);

}  // namespace jetseg
