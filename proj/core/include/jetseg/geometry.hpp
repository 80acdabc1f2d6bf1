#pragma once

#include <cstdint>
#include <vector>

#include "jetseg/grid.hpp"
#include "jetseg/ingest.hpp"

namespace jetseg {

/// Height L, lift-off S and area A of the stable flame, in metres.
struct FlameGeometry {
  double height_m = 0.0;
  double liftoff_m = 0.0;
  double area_m2 = 0.0;
  Pixel tip_px;   // topmost row of the stable component (leftmost pixel there)
  Pixel base_px;  // bottom row of the stable component (leftmost pixel there)
  std::int64_t component_pixel_count = 0;
  bool liftoff_clamped = false;  // base below the nozzle row, S reported as 0
  double polygon_area_m2 = 0.0;  // shoelace area of the traced contour, diagnostic only
};

/// Union of the three zone labels.
FlameMask flame_region(const LabelMask& mask);

/// Pixels at or above the boundary isotherm.
FlameMask boundary_region(const TemperatureField& field,
                          double boundary_kelvin = kFlameBoundaryKelvin);

/// Component id per pixel (0 = background, 1.. in raster order of first pixel).
struct Components {
  Grid<std::int32_t, struct ComponentTag> labels;
  std::vector<std::int64_t> sizes;  // sizes[id - 1]
};

/// 8-connected labelling.
Components label_components(const FlameMask& mask);

/// Keeps the largest 8-connected component; ties go to the component whose
/// first pixel comes first in row-major order. Throws NoFlameError on an
/// empty mask.
FlameMask largest_component(const FlameMask& mask);

/// Moore-neighbour boundary trace of the largest component. The polygon is
/// closed implicitly (last pixel connects to the first) and runs
/// counter-clockwise as the image is displayed (row 0 at the top). Thin
/// parts are walked in both directions, so pixels can repeat.
std::vector<Pixel> contour(const FlameMask& mask);

/// Signed shoelace area in pixels^2 with x = col, y = -row; positive for a
/// counter-clockwise polygon.
double polygon_area_px(const std::vector<Pixel>& polygon);

/// Geometry of the largest component under the given calibration.
FlameGeometry extract_features(const FlameMask& mask, const Calibration& calibration);

}  // namespace jetseg
