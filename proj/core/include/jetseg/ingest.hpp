#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jetseg/config.hpp"
#include "jetseg/grid.hpp"

namespace jetseg {

inline constexpr double kFlameBoundaryKelvin = 800.0;

enum class RowAxis {
  Downward,  // row 0 is the top of the frame
};

/// Pixel scale and nozzle position for one camera set-up.
struct Calibration {
  double meters_per_pixel = 0.0;
  int nozzle_row = 0;
  int nozzle_col = 0;
  RowAxis row_axis = RowAxis::Downward;
  double flame_boundary_kelvin = kFlameBoundaryKelvin;

  /// Throws ConfigError for a non-positive scale, BoundsError when the nozzle
  /// falls outside a rows x cols frame.
  void validate(int rows, int cols) const;
};

/// One row of the experiment table (outlet diameter, wind, ambient, ...).
struct ExperimentMeta {
  double pipe_outlet_diameter = 0.0;  // m
  double wind_speed = 0.0;            // m/s
  double ambient_temperature = 0.0;   // degC
  double fuel_velocity_min = 0.0;     // m/s
  double fuel_velocity_max = 0.0;     // m/s
  int image_count = 0;

  void validate() const;
};

Calibration calibration_from_config(const KeyValueConfig& cfg);
ExperimentMeta experiment_from_config(const KeyValueConfig& cfg);

// --- temperature CSV -------------------------------------------------------

/// Parses comma-separated Kelvin values, one image row per line. A single
/// trailing newline is allowed; nothing else (no header, no blank lines).
TemperatureField parse_temperature_csv(std::string_view text, std::string frame_id = {});
TemperatureField load_temperature_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal form, so parse(format(x)) == x bit-for-bit.
std::string format_temperature_csv(const TemperatureField& field);
void save_temperature_csv(const TemperatureField& field, const std::filesystem::path& path);

// --- label mask PGM --------------------------------------------------------

LabelMask decode_label_mask_pgm(std::string_view bytes);
LabelMask load_label_mask_pgm(const std::filesystem::path& path);

/// Always emits the header "P5\n<cols> <rows>\n255\n" followed by raw labels.
std::string encode_label_mask_pgm(const LabelMask& mask);
void save_label_mask_pgm(const LabelMask& mask, const std::filesystem::path& path);

// --- dataset split ---------------------------------------------------------

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct DatasetSplit {
  std::vector<std::string> train_ids;
  std::vector<std::string> val_ids;
  std::vector<std::string> test_ids;
};

/// Seeded shuffle, then val = round(n*val), test = round(n*test) and the
/// remainder to train. Each partition keeps the input order of its ids.
DatasetSplit split_dataset(std::span<const std::string> ids, SplitFractions fractions,
                           std::uint64_t seed);

// --- shared text helpers ---------------------------------------------------

std::string format_real(double value);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace jetseg
