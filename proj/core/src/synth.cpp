#include "jetseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "jetseg/errors.hpp"
#include "jetseg/random.hpp"

namespace jetseg {

namespace {

// Row position of the axial temperature maximum, as a share of the flame
// height measured from the base.
constexpr double kPeakPosition = 0.35;
constexpr double kAxialFloor = 0.5;

double axial_gain(double s) {
  s = std::clamp(s, 0.0, 1.0);
  if (s <= kPeakPosition) {
    return kAxialFloor + (1.0 - kAxialFloor) * s / kPeakPosition;
  }
  return 1.0 - (1.0 - kAxialFloor) * (s - kPeakPosition) / (1.0 - kPeakPosition);
}

}  // namespace

void FlameSpec::validate() const {
  if (rows <= 0 || cols <= 0) {
    throw ConfigError("frame dimensions must be positive");
  }
  if (!(mpp > 0.0) || !std::isfinite(mpp)) {
    throw ConfigError("mpp must be positive");
  }
  if (!(liftoff_m >= 0.0) || !(height_m > 0.0) || !(max_width_m > 0.0)) {
    throw ConfigError("need liftoff >= 0, height > 0 and width > 0");
  }
  if (!(height_m >= max_width_m)) {
    throw ConfigError("flame height must be at least its width");
  }
  if (!(peak_temperature > kFlameBoundaryKelvin) || !(ambient_temperature > 0.0) ||
      !(ambient_temperature < kFlameBoundaryKelvin)) {
    throw ConfigError("need peak > 800 K > ambient > 0");
  }
  double sum = 0.0;
  for (const double f : zone_fractions) {
    if (!(f > 0.0)) {
      throw ConfigError("zone fractions must be positive");
    }
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("zone fractions must sum to 1");
  }
  if (!(noise_sigma >= 0.0)) {
    throw ConfigError("noise_sigma must be non-negative");
  }
  Calibration{mpp, nozzle_row, nozzle_col}.validate(rows, cols);
  const double radius = max_width_m / (2.0 * mpp);
  const double tip = nozzle_row - (liftoff_m + height_m) / mpp;
  if (tip < 0.0 || nozzle_col - radius < 0.0 || nozzle_col + radius > cols - 1) {
    throw BoundsError("flame does not fit in the " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " frame");
  }
}

FlameSpec flame_spec_from_config(const KeyValueConfig& cfg) {
  FlameSpec s;
  s.rows = static_cast<int>(cfg.get_int("rows", s.rows));
  s.cols = static_cast<int>(cfg.get_int("cols", s.cols));
  s.mpp = cfg.get_double("mpp", s.mpp);
  s.nozzle_row = static_cast<int>(cfg.get_int("nozzle_row", s.nozzle_row));
  s.nozzle_col = static_cast<int>(cfg.get_int("nozzle_col", s.nozzle_col));
  s.liftoff_m = cfg.get_double("liftoff_m", s.liftoff_m);
  s.height_m = cfg.get_double("height_m", s.height_m);
  s.max_width_m = cfg.get_double("max_width_m", s.max_width_m);
  s.peak_temperature = cfg.get_double("peak_temperature", s.peak_temperature);
  s.ambient_temperature = cfg.get_double("ambient_temperature", s.ambient_temperature);
  if (cfg.has("zone_fractions")) {
    const auto f = cfg.get_doubles("zone_fractions");
    if (f.size() != 3) {
      throw ConfigError("zone_fractions needs three values");
    }
    s.zone_fractions = {f[0], f[1], f[2]};
  }
  s.noise_sigma = cfg.get_double("noise_sigma", s.noise_sigma);
  s.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<long long>(s.seed)));
  s.validate();
  return s;
}

KeyValueConfig flame_spec_to_config(const FlameSpec& s) {
  KeyValueConfig cfg;
  cfg.set("rows", std::to_string(s.rows));
  cfg.set("cols", std::to_string(s.cols));
  cfg.set("mpp", format_real(s.mpp));
  cfg.set("nozzle_row", std::to_string(s.nozzle_row));
  cfg.set("nozzle_col", std::to_string(s.nozzle_col));
  cfg.set("liftoff_m", format_real(s.liftoff_m));
  cfg.set("height_m", format_real(s.height_m));
  cfg.set("max_width_m", format_real(s.max_width_m));
  cfg.set("peak_temperature", format_real(s.peak_temperature));
  cfg.set("ambient_temperature", format_real(s.ambient_temperature));
  cfg.set("zone_fractions", format_real(s.zone_fractions[0]) + "," +
                                format_real(s.zone_fractions[1]) + "," +
                                format_real(s.zone_fractions[2]));
  cfg.set("noise_sigma", format_real(s.noise_sigma));
  cfg.set("seed", std::to_string(s.seed));
  return cfg;
}

double stadium_area(double width, double height) {
  const double r = width / 2.0;
  return width * (height - width) + std::numbers::pi * r * r;
}

SynthResult generate_flame(const FlameSpec& spec) {
  spec.validate();
  const double radius = spec.max_width_m / (2.0 * spec.mpp);
  const double base = spec.nozzle_row - spec.liftoff_m / spec.mpp;
  const double tip = spec.nozzle_row - (spec.liftoff_m + spec.height_m) / spec.mpp;
  const double axis_top = tip + radius;
  const double axis_bottom = base - radius;
  const double span = base - tip;
  const double rise = spec.peak_temperature - kFlameBoundaryKelvin;
  const double central_from = 1.0 - spec.zone_fractions[0];
  const double middle_from = central_from - spec.zone_fractions[1];

  KelvinGrid kelvin(spec.rows, spec.cols, spec.ambient_temperature);
  LabelMask truth(spec.rows, spec.cols, static_cast<std::uint8_t>(kBackground));
  for (int r = 0; r < spec.rows; ++r) {
    const double nearest_row = std::clamp(static_cast<double>(r), axis_top, axis_bottom);
    const double dr = r - nearest_row;
    const double gain = axial_gain((base - r) / span);
    for (int c = 0; c < spec.cols; ++c) {
      const double dc = c - spec.nozzle_col;
      const double d = std::sqrt(dr * dr + dc * dc);
      if (d > radius) {
        continue;
      }
      const double u = (1.0 - d / radius) * gain;
      kelvin(r, c) = kFlameBoundaryKelvin + rise * u;
      truth(r, c) = u >= central_from  ? kCentral
                    : u >= middle_from ? kMiddle
                                       : kOuter;
    }
  }

  if (spec.noise_sigma > 0.0) {
    Rng rng(spec.seed);
    for (auto& t : kelvin.values()) {
      t = std::max(1.0, t + spec.noise_sigma * rng.normal());
    }
  }

  SynthResult out;
  out.field = TemperatureField{std::move(kelvin), "synth_" + std::to_string(spec.seed)};
  out.truth_mask = std::move(truth);
  out.calibration = Calibration{spec.mpp, spec.nozzle_row, spec.nozzle_col};
  out.truth_geometry.height_m = spec.height_m;
  out.truth_geometry.liftoff_m = spec.liftoff_m;
  out.truth_geometry.area_m2 = stadium_area(spec.max_width_m, spec.height_m);
  out.truth_geometry.tip_px = {static_cast<int>(std::ceil(tip)), spec.nozzle_col};
  out.truth_geometry.base_px = {static_cast<int>(std::floor(base)), spec.nozzle_col};
  return out;
}

}  // namespace jetseg
