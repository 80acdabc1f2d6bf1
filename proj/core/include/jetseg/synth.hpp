#pragma once

#include <array>
#include <cstdint>

#include "jetseg/config.hpp"
#include "jetseg/geometry.hpp"
#include "jetseg/grid.hpp"
#include "jetseg/ingest.hpp"

namespace jetseg {

/// Vertical flame description. The flame is a stadium (a rectangle capped by
/// a half-disk at each end) of width max_width_m whose axis is the nozzle
/// column, spanning lift-off S to S + L above the nozzle row.
struct FlameSpec {
  int rows = 256;
  int cols = 128;
  double mpp = 0.05;
  int nozzle_row = 240;
  int nozzle_col = 64;
  double liftoff_m = 1.0;
  double height_m = 4.0;
  double max_width_m = 1.0;
  double peak_temperature = 1300.0;
  double ambient_temperature = 300.0;
  // Shares of the boundary-to-peak temperature range, hottest zone first.
  std::array<double, 3> zone_fractions{0.3, 0.3, 0.4};  // central, middle, outer
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  /// Throws ConfigError for inconsistent values and BoundsError when the
  /// flame does not fit in the frame.
  void validate() const;
};

FlameSpec flame_spec_from_config(const KeyValueConfig& cfg);
KeyValueConfig flame_spec_to_config(const FlameSpec& spec);

struct SynthResult {
  TemperatureField field;
  LabelMask truth_mask;
  FlameGeometry truth_geometry;  // the requested L and S, analytic stadium area
  Calibration calibration;
};

/// Analytic area w (h - w) + pi (w / 2)^2 of a stadium of width w, height h.
double stadium_area(double width, double height);

SynthResult generate_flame(const FlameSpec& spec);

}  // namespace jetseg
