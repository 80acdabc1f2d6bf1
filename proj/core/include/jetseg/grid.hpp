#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jetseg/errors.hpp"

namespace jetseg {

/// Dense row-major 2-D raster. The Tag parameter keeps rasters with the same
/// pixel type but different meaning (intensity vs. label) from mixing.
template <typename T, typename Tag>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(int rows, int cols, T fill = T{}) : rows_(rows), cols_(cols) {
    check_dims(rows, cols);
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
  }

  Grid(int rows, int cols, std::vector<T> values)
      : rows_(rows), cols_(cols), data_(std::move(values)) {
    check_dims(rows, cols);
    if (data_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
      throw ShapeError("grid value count " + std::to_string(data_.size()) +
                       " does not match " + std::to_string(rows) + "x" +
                       std::to_string(cols));
    }
  }

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int r, int c) noexcept { return data_[index(r, c)]; }
  const T& operator()(int r, int c) const noexcept { return data_[index(r, c)]; }

  bool contains(int r, int c) const noexcept {
    return r >= 0 && c >= 0 && r < rows_ && c < cols_;
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  template <typename U, typename OtherTag>
  bool same_shape(const Grid<U, OtherTag>& other) const noexcept {
    return rows_ == other.rows() && cols_ == other.cols();
  }

  bool operator==(const Grid&) const = default;

 private:
  static void check_dims(int rows, int cols) {
    if (rows <= 0 || cols <= 0) {
      throw ShapeError("grid dimensions must be positive, got " + std::to_string(rows) +
                       "x" + std::to_string(cols));
    }
  }

  std::size_t index(int r, int c) const noexcept {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

struct KelvinTag;
struct LabelTag;
struct IntensityTag;
struct NormalizedTag;
struct BinaryTag;

using KelvinGrid = Grid<double, KelvinTag>;

/// Per-pixel zone labels: 0 background, 1 outer, 2 middle, 3 central.
using LabelMask = Grid<std::uint8_t, LabelTag>;

/// 8-bit grayscale image derived from a temperature field.
using IntensityImage = Grid<std::uint8_t, IntensityTag>;

using NormalizedImage = Grid<double, NormalizedTag>;

/// 0/1 indicator raster (flame support, a single zone, a Chan-Vese phase).
using BinaryMask = Grid<std::uint8_t, BinaryTag>;
using FlameMask = BinaryMask;

enum Label : std::uint8_t {
  kBackground = 0,
  kOuter = 1,
  kMiddle = 2,
  kCentral = 3,
};

inline constexpr int kLabelCount = 4;

/// A temperature matrix for one IR frame, in Kelvin.
struct TemperatureField {
  KelvinGrid kelvin;
  std::string frame_id;

  int rows() const noexcept { return kelvin.rows(); }
  int cols() const noexcept { return kelvin.cols(); }
};

struct Pixel {
  int row = 0;
  int col = 0;
  auto operator<=>(const Pixel&) const = default;
};

}  // namespace jetseg
