#pragma once

#include <array>

#include "jetseg/grid.hpp"

namespace jetseg {

struct ChanVeseParams {
  double mu = 0.25;        // edge length weight
  double lambda1 = 1.0;    // fit weight of the bright (object) phase
  double lambda2 = 1.0;    // fit weight of the complementary phase
  double tolerance = 1e-3; // stop when the RMS of phi_new - phi_old drops below this
  int max_iter = 500;
  double dt = 0.5;

  void validate() const;
};

/// Per-zone parameter table tuned for the three radiation zones.
struct ChanVeseZoneParams {
  ChanVeseParams outer{0.3, 1.0, 1.5, 0.001};
  ChanVeseParams middle{0.01, 0.5, 2.0, 0.002};
  ChanVeseParams central{0.02, 0.5, 2.5, 0.0009};
};

struct ChanVeseRun {
  BinaryMask region;          // pixels of the brighter phase
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;    // constant input or a phase vanished
  double region_mean = 0.0;
  double complement_mean = 0.0;
};

/// Two-phase piecewise-constant Chan-Vese. Intensities are min-max stretched
/// to [0, 1] over the pixels being segmented before the evolution. The level set starts as a 5-pixel-period checkerboard whose positive
/// squares are the brighter ones, and evolves with the semi-implicit
/// curvature scheme and a smoothed delta of width 1 pixel. lambda1 weights
/// the phi > 0 phase.
ChanVeseRun chanvese_two_phase(const NormalizedImage& image, const ChanVeseParams& params);

/// Same, restricted to the set pixels of `domain`: phase means use domain
/// pixels only and the returned region is a subset of the domain.
ChanVeseRun chanvese_two_phase(const NormalizedImage& image, const ChanVeseParams& params,
                               const BinaryMask& domain);

/// Central over middle over outer; uncovered pixels stay background.
LabelMask composite_zones(const BinaryMask& outer, const BinaryMask& middle,
                          const BinaryMask& central);

struct ChanVeseResult {
  LabelMask mask;
  std::array<ChanVeseRun, 3> zones;  // outer, middle, central
  bool converged = false;            // all three runs converged
  bool degenerate = false;           // any run degenerate
};

/// Two-phase runs on v / 255, nested: the middle zone is split out of the
/// outer region and the central zone out of the middle region.
ChanVeseResult chanvese_segment(const IntensityImage& image,
                                const ChanVeseZoneParams& params = {});

}  // namespace jetseg
