#include "jetseg/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jetseg/errors.hpp"
#include "jetseg/random.hpp"

namespace jetseg {

std::uint8_t kelvin_to_intensity(double kelvin, IntensityRange range) {
  const double t = std::clamp((kelvin - range.t_min) / (range.t_max - range.t_min), 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(255.0 * t + 0.5));
}

IntensityImage to_intensity(const TemperatureField& field, IntensityRange range) {
  if (!(range.t_min < range.t_max)) {
    throw RangeError("intensity window needs t_min < t_max");
  }
  IntensityImage out(field.rows(), field.cols());
  const auto src = field.kelvin.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = kelvin_to_intensity(src[i], range);
  }
  return out;
}

NormalizedImage unit_scale(const IntensityImage& image) {
  NormalizedImage out(image.rows(), image.cols());
  const auto src = image.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<double>(src[i]) / 255.0;
  }
  return out;
}

NormalizedDataset normalize_dataset(std::span<const IntensityImage> images) {
  if (images.empty()) {
    throw EmptyDatasetError("normalize_dataset needs at least one image");
  }
  double sum = 0.0;
  double count = 0.0;
  for (const auto& img : images) {
    for (const auto v : img.values()) {
      sum += static_cast<double>(v) / 255.0;
    }
    count += static_cast<double>(img.size());
  }
  const double mean = sum / count;
  double sq = 0.0;
  for (const auto& img : images) {
    for (const auto v : img.values()) {
      const double d = static_cast<double>(v) / 255.0 - mean;
      sq += d * d;
    }
  }
  const double stddev = std::sqrt(sq / count);
  if (!(stddev > 0.0)) {
    throw DegenerateError("dataset has zero intensity variance");
  }

  NormalizedDataset out;
  out.mean = mean;
  out.stddev = stddev;
  out.images.reserve(images.size());
  for (const auto& img : images) {
    NormalizedImage n(img.rows(), img.cols());
    const auto src = img.values();
    auto dst = n.values();
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = (static_cast<double>(src[i]) / 255.0 - mean) / stddev;
    }
    out.images.push_back(std::move(n));
  }
  return out;
}

namespace {

template <typename G>
G flip_horizontal(const G& in) {
  G out(in.rows(), in.cols());
  for (int r = 0; r < in.rows(); ++r) {
    for (int c = 0; c < in.cols(); ++c) {
      out(r, c) = in(r, in.cols() - 1 - c);
    }
  }
  return out;
}

template <typename G>
G crop(const G& in, const Crop& box) {
  G out(box.height, box.width);
  for (int r = 0; r < box.height; ++r) {
    for (int c = 0; c < box.width; ++c) {
      out(r, c) = in(box.row + r, box.col + c);
    }
  }
  return out;
}

int scaled_extent(int n, double factor) {
  return std::max(1, static_cast<int>(std::lround(static_cast<double>(n) * factor)));
}

// Pixel-centre aligned source coordinate of destination index i.
double source_coord(int i, double factor) { return (i + 0.5) / factor - 0.5; }

IntensityImage scale_bilinear(const IntensityImage& in, double factor) {
  const int rows = scaled_extent(in.rows(), factor);
  const int cols = scaled_extent(in.cols(), factor);
  IntensityImage out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const double sr = std::clamp(source_coord(r, factor), 0.0, in.rows() - 1.0);
    const int r0 = static_cast<int>(std::floor(sr));
    const int r1 = std::min(r0 + 1, in.rows() - 1);
    const double fr = sr - r0;
    for (int c = 0; c < cols; ++c) {
      const double sc = std::clamp(source_coord(c, factor), 0.0, in.cols() - 1.0);
      const int c0 = static_cast<int>(std::floor(sc));
      const int c1 = std::min(c0 + 1, in.cols() - 1);
      const double fc = sc - c0;
      const double top = in(r0, c0) * (1.0 - fc) + in(r0, c1) * fc;
      const double bottom = in(r1, c0) * (1.0 - fc) + in(r1, c1) * fc;
      const double v = top * (1.0 - fr) + bottom * fr;
      out(r, c) = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
    }
  }
  return out;
}

LabelMask scale_nearest(const LabelMask& in, double factor) {
  const int rows = scaled_extent(in.rows(), factor);
  const int cols = scaled_extent(in.cols(), factor);
  LabelMask out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const int sr = std::clamp(static_cast<int>(std::floor((r + 0.5) / factor)), 0, in.rows() - 1);
    for (int c = 0; c < cols; ++c) {
      const int sc =
          std::clamp(static_cast<int>(std::floor((c + 0.5) / factor)), 0, in.cols() - 1);
      out(r, c) = in(sr, sc);
    }
  }
  return out;
}

}  // namespace

AugmentedPair augment(const IntensityImage& image, const LabelMask& mask, const AugmentOp& op) {
  if (!image.same_shape(mask)) {
    throw ShapeError("augment: image and mask dimensions differ");
  }
  if (const auto* box = std::get_if<Crop>(&op)) {
    if (box->row < 0 || box->col < 0 || box->height <= 0 || box->width <= 0 ||
        box->row + box->height > image.rows() || box->col + box->width > image.cols()) {
      throw BoundsError("crop window is outside the image");
    }
    return {crop(image, *box), crop(mask, *box)};
  }
  if (const auto* s = std::get_if<Scale>(&op)) {
    if (!(s->factor > 0.0) || !std::isfinite(s->factor)) {
      throw RangeError("scale factor must be positive");
    }
    return {scale_bilinear(image, s->factor), scale_nearest(mask, s->factor)};
  }
  return {flip_horizontal(image), flip_horizontal(mask)};
}

AugmentOp random_augment_op(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  switch (rng.below(3)) {
    case 0:
      return HFlip{};
    case 1:
      return Scale{rng.uniform(0.75, 1.25)};
    default: {
      const int h = std::max(1, static_cast<int>(std::ceil(rows * rng.uniform(0.75, 1.0))));
      const int w = std::max(1, static_cast<int>(std::ceil(cols * rng.uniform(0.75, 1.0))));
      const int r0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(rows - h + 1)));
      const int c0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(cols - w + 1)));
      return Crop{r0, c0, h, w};
    }
  }
}

AugmentedPair augment(const IntensityImage& image, const LabelMask& mask, std::uint64_t seed) {
  return augment(image, mask, random_augment_op(image.rows(), image.cols(), seed));
}

ClassWeights class_weights_from_propensity(const std::array<double, kLabelCount>& propensity,
                                           double c) {
  ClassWeights out;
  out.c = c;
  out.propensity = propensity;
  for (int k = 0; k < kLabelCount; ++k) {
    const double p = propensity[static_cast<std::size_t>(k)];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw RangeError("class propensity must lie in [0, 1]");
    }
    if (!(c + p > 1.0)) {
      throw MathError("ln(c + p) <= 0 for class " + std::to_string(k) +
                      "; use c > 1 when a class is absent");
    }
    out.weight[static_cast<std::size_t>(k)] = 1.0 / std::log(c + p);
  }
  return out;
}

ClassWeights compute_class_weights(std::span<const LabelMask> masks, double c) {
  if (masks.empty()) {
    throw EmptyDatasetError("compute_class_weights needs at least one mask");
  }
  std::array<std::uint64_t, kLabelCount> counts{};
  std::uint64_t total = 0;
  for (const auto& m : masks) {
    for (const auto v : m.values()) {
      if (v >= kLabelCount) {
        throw LabelError("label " + std::to_string(v) + " outside {0,1,2,3}");
      }
      ++counts[v];
    }
    total += m.size();
  }
  std::array<double, kLabelCount> p{};
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  }
  return class_weights_from_propensity(p, c);
}

}  // namespace jetseg
