#include "jetseg/threshold.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>

#include "jetseg/errors.hpp"

namespace jetseg {

namespace {
bool overlaps(const Band& a, const Band& b) { return a.lo <= b.hi && b.lo <= a.hi; }

void check_band(const Band& b, const char* name) {
  if (b.lo < 0 || b.hi > 255 || b.lo > b.hi) {
    throw ConfigError(std::string("invalid ") + name + " band [" + std::to_string(b.lo) + ", " +
                      std::to_string(b.hi) + "]");
  }
}
}  // namespace

void ThresholdBands::validate() const {
  check_band(outer, "outer");
  check_band(middle, "middle");
  check_band(central, "central");
  if (overlaps(outer, middle) || overlaps(outer, central) || overlaps(middle, central)) {
    throw ConfigError("threshold bands overlap");
  }
}

LabelMask threshold_segment(const IntensityImage& image, const ThresholdBands& bands) {
  bands.validate();
  std::array<std::uint8_t, 256> lut{};
  for (int v = 0; v < 256; ++v) {
    if (bands.central.contains(v)) {
      lut[static_cast<std::size_t>(v)] = kCentral;
    } else if (bands.middle.contains(v)) {
      lut[static_cast<std::size_t>(v)] = kMiddle;
    } else if (bands.outer.contains(v)) {
      lut[static_cast<std::size_t>(v)] = kOuter;
    }
  }
  LabelMask out(image.rows(), image.cols());
  const auto src = image.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = lut[src[i]];
  }
  return out;
}

IntensityImage median_filter(const IntensityImage& image, int radius) {
  if (radius < 0) {
    throw RangeError("median radius must be >= 0");
  }
  if (radius == 0) {
    return image;
  }
  const int rows = image.rows();
  const int cols = image.cols();
  IntensityImage out(rows, cols);
  std::vector<std::uint8_t> window;
  window.reserve(static_cast<std::size_t>((2 * radius + 1) * (2 * radius + 1)));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      window.clear();
      for (int dr = -radius; dr <= radius; ++dr) {
        const int rr = std::clamp(r + dr, 0, rows - 1);
        for (int dc = -radius; dc <= radius; ++dc) {
          window.push_back(image(rr, std::clamp(c + dc, 0, cols - 1)));
        }
      }
      auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
      std::nth_element(window.begin(), mid, window.end());
      out(r, c) = *mid;
    }
  }
  return out;
}

namespace {

using Histogram = std::array<double, 256>;

Histogram box_smooth(const Histogram& h, int radius) {
  Histogram out{};
  for (int i = 0; i < 256; ++i) {
    double sum = 0.0;
    for (int d = -radius; d <= radius; ++d) {
      sum += h[static_cast<std::size_t>(std::clamp(i + d, 0, 255))];
    }
    out[static_cast<std::size_t>(i)] = sum / (2.0 * radius + 1.0);
  }
  return out;
}

// Local maxima (plateaus collapse to their midpoint) with their topographic
// prominence. The histogram is treated as zero-padded on both sides, so a
// peak with no higher ground on one side descends to zero there.
struct Peak {
  int pos;
  double prominence;
};

double side_base(const Histogram& s, int from, int step, double height) {
  double base = height;
  for (int k = from; k >= 0 && k < 256; k += step) {
    const double v = s[static_cast<std::size_t>(k)];
    if (v > height) {
      return base;
    }
    base = std::min(base, v);
  }
  return 0.0;
}

std::vector<Peak> find_peaks(const Histogram& s) {
  std::vector<Peak> peaks;
  int i = 0;
  while (i < 256) {
    int j = i;
    while (j + 1 < 256 && s[static_cast<std::size_t>(j + 1)] == s[static_cast<std::size_t>(i)]) {
      ++j;
    }
    const double h = s[static_cast<std::size_t>(i)];
    const bool left_lower = i == 0 || s[static_cast<std::size_t>(i - 1)] < h;
    const bool right_lower = j == 255 || s[static_cast<std::size_t>(j + 1)] < h;
    if (h > 0.0 && left_lower && right_lower) {
      const double base = std::max(side_base(s, i - 1, -1, h), side_base(s, j + 1, +1, h));
      peaks.push_back({(i + j) / 2, h - base});
    }
    i = j + 1;
  }
  return peaks;
}

// Lowest point strictly between two modes; the midpoint of a flat minimum.
int valley_between(const Histogram& s, int a, int b) {
  double best = s[static_cast<std::size_t>(a + 1)];
  for (int k = a + 1; k < b; ++k) {
    best = std::min(best, s[static_cast<std::size_t>(k)]);
  }
  int first = -1;
  int last = -1;
  for (int k = a + 1; k < b; ++k) {
    if (s[static_cast<std::size_t>(k)] == best) {
      if (first < 0) {
        first = k;
      }
      last = k;
    } else if (first >= 0) {
      break;
    }
  }
  return (first + last) / 2;
}

}  // namespace

AutoBandsResult auto_bands(std::span<const IntensityImage> training_images,
                           const AutoBandsOptions& options) {
  if (training_images.empty()) {
    throw EmptyDatasetError("auto_bands needs at least one training image");
  }
  Histogram hist{};
  for (const auto& img : training_images) {
    const auto filtered = median_filter(img, options.median_radius);
    for (const auto v : filtered.values()) {
      hist[v] += 1.0;
    }
  }
  const auto smooth =
      box_smooth(box_smooth(hist, options.smoothing_radius), options.smoothing_radius);

  const auto peaks = find_peaks(smooth);
  const double tallest = *std::max_element(smooth.begin(), smooth.end());
  AutoBandsResult result;
  for (const auto& p : peaks) {
    if (p.prominence >= options.min_prominence * tallest) {
      result.modes.push_back(p.pos);
    }
  }

  const auto n = result.modes.size();
  if (n < 4) {
    result.fallback = true;
    return result;
  }
  const int background = result.modes[n - 4];
  const int m1 = result.modes[n - 3];
  const int m2 = result.modes[n - 2];
  const int m3 = result.modes[n - 1];
  const int v0 = valley_between(smooth, background, m1);
  const int v1 = valley_between(smooth, m1, m2);
  const int v2 = valley_between(smooth, m2, m3);
  result.bands = ThresholdBands{{v0 + 1, v1}, {v1 + 1, v2}, {v2 + 1, 255}};
  result.bands.validate();
  return result;
}

}  // namespace jetseg
