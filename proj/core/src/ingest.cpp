#include "jetseg/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "jetseg/errors.hpp"
#include "jetseg/random.hpp"

namespace jetseg {

void Calibration::validate(int rows, int cols) const {
  if (!(meters_per_pixel > 0.0) || !std::isfinite(meters_per_pixel)) {
    throw ConfigError("meters_per_pixel must be positive");
  }
  if (nozzle_row < 0 || nozzle_row >= rows || nozzle_col < 0 || nozzle_col >= cols) {
    throw BoundsError("nozzle (" + std::to_string(nozzle_row) + ", " +
                      std::to_string(nozzle_col) + ") is outside the " +
                      std::to_string(rows) + "x" + std::to_string(cols) + " frame");
  }
}

void ExperimentMeta::validate() const {
  if (!(pipe_outlet_diameter > 0.0 && pipe_outlet_diameter < 1.0)) {
    throw ConfigError("pipe_outlet_diameter must lie in (0, 1) m");
  }
  if (!(wind_speed > 0.0) || !(ambient_temperature > 0.0) || !(fuel_velocity_min > 0.0) ||
      !(fuel_velocity_max >= fuel_velocity_min) || image_count <= 0) {
    throw ConfigError("experiment metadata values must be positive");
  }
}

Calibration calibration_from_config(const KeyValueConfig& cfg) {
  Calibration cal;
  cal.meters_per_pixel = cfg.get_double("meters_per_pixel");
  cal.nozzle_row = static_cast<int>(cfg.get_int("nozzle_row"));
  cal.nozzle_col = static_cast<int>(cfg.get_int("nozzle_col"));
  cal.flame_boundary_kelvin = cfg.get_double("flame_boundary_kelvin", kFlameBoundaryKelvin);
  if (!(cal.meters_per_pixel > 0.0)) {
    throw ConfigError("meters_per_pixel must be positive");
  }
  if (!(cal.flame_boundary_kelvin > 0.0)) {
    throw ConfigError("flame_boundary_kelvin must be positive");
  }
  return cal;
}

ExperimentMeta experiment_from_config(const KeyValueConfig& cfg) {
  ExperimentMeta meta;
  meta.pipe_outlet_diameter = cfg.get_double("pipe_outlet_diameter");
  meta.wind_speed = cfg.get_double("wind_speed");
  meta.ambient_temperature = cfg.get_double("ambient_temperature");
  meta.fuel_velocity_min = cfg.get_double("fuel_velocity_min");
  meta.fuel_velocity_max = cfg.get_double("fuel_velocity_max");
  meta.image_count = static_cast<int>(cfg.get_int("image_count"));
  meta.validate();
  return meta;
}

std::string format_real(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw FormatError("cannot write " + path.string());
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    throw FormatError("write failed for " + path.string());
  }
}

TemperatureField parse_temperature_csv(std::string_view text, std::string frame_id) {
  if (!text.empty() && text.back() == '\n') {
    text.remove_suffix(1);
  }
  if (text.empty()) {
    throw FormatError("temperature CSV is empty");
  }

  std::vector<double> values;
  int rows = 0;
  int cols = -1;
  while (true) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    if (line.empty()) {
      throw FormatError("blank line at row " + std::to_string(rows));
    }
    int col = 0;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      const auto cell = line.substr(pos, comma == std::string_view::npos ? line.size() - pos
                                                                         : comma - pos);
      double value = 0.0;
      const auto* end = cell.data() + cell.size();
      const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
      if (cell.empty() || ec != std::errc{} || ptr != end) {
        throw ValueError("non-numeric temperature '" + std::string(cell) + "'", rows, col);
      }
      if (!std::isfinite(value)) {
        throw ValueError("non-finite temperature", rows, col);
      }
      if (!(value > 0.0)) {
        throw ValueError("temperature must be > 0 K, got " + std::string(cell), rows, col);
      }
      values.push_back(value);
      ++col;
      if (comma == std::string_view::npos) {
        break;
      }
      pos = comma + 1;
    }
    if (cols < 0) {
      cols = col;
    } else if (col != cols) {
      throw FormatError("ragged temperature CSV: row " + std::to_string(rows) + " has " +
                        std::to_string(col) + " fields, expected " + std::to_string(cols));
    }
    ++rows;
    if (nl == std::string_view::npos) {
      break;
    }
    text = text.substr(nl + 1);
  }
  return TemperatureField{KelvinGrid(rows, cols, std::move(values)), std::move(frame_id)};
}

TemperatureField load_temperature_csv(const std::filesystem::path& path) {
  return parse_temperature_csv(read_file(path), path.stem().string());
}

std::string format_temperature_csv(const TemperatureField& field) {
  std::string out;
  out.reserve(field.kelvin.size() * 8);
  for (int r = 0; r < field.rows(); ++r) {
    for (int c = 0; c < field.cols(); ++c) {
      if (c > 0) {
        out += ',';
      }
      out += format_real(field.kelvin(r, c));
    }
    out += '\n';
  }
  return out;
}

void save_temperature_csv(const TemperatureField& field, const std::filesystem::path& path) {
  write_file(path, format_temperature_csv(field));
}

namespace {

// Reads one whitespace-delimited PGM header token, skipping '#' comments.
std::string_view next_token(std::string_view bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    const char ch = bytes[pos];
    if (ch == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') {
        ++pos;
      }
    } else if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
      ++pos;
    } else {
      break;
    }
  }
  const auto start = pos;
  while (pos < bytes.size() && bytes[pos] != ' ' && bytes[pos] != '\t' &&
         bytes[pos] != '\n' && bytes[pos] != '\r') {
    ++pos;
  }
  return bytes.substr(start, pos - start);
}

int header_int(std::string_view token, const char* what) {
  int value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc{} || ptr != end) {
    throw FormatError(std::string("bad PGM ") + what + " '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

LabelMask decode_label_mask_pgm(std::string_view bytes) {
  std::size_t pos = 0;
  if (next_token(bytes, pos) != "P5") {
    throw FormatError("not a binary PGM (expected magic P5)");
  }
  const int cols = header_int(next_token(bytes, pos), "width");
  const int rows = header_int(next_token(bytes, pos), "height");
  const int maxval = header_int(next_token(bytes, pos), "maxval");
  if (rows <= 0 || cols <= 0) {
    throw FormatError("PGM dimensions must be positive");
  }
  if (maxval != 255) {
    throw FormatError("PGM maxval must be 255, got " + std::to_string(maxval));
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (pos >= bytes.size()) {
    throw FormatError("PGM raster missing");
  }
  ++pos;
  const std::size_t count = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (bytes.size() - pos != count) {
    throw FormatError("PGM raster has " + std::to_string(bytes.size() - pos) +
                      " bytes, expected " + std::to_string(count));
  }
  std::vector<std::uint8_t> labels(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto v = static_cast<std::uint8_t>(bytes[pos + i]);
    if (v >= kLabelCount) {
      throw LabelError("label " + std::to_string(v) + " at pixel (" +
                       std::to_string(i / static_cast<std::size_t>(cols)) + ", " +
                       std::to_string(i % static_cast<std::size_t>(cols)) +
                       ") is outside {0,1,2,3}");
    }
    labels[i] = v;
  }
  return LabelMask(rows, cols, std::move(labels));
}

LabelMask load_label_mask_pgm(const std::filesystem::path& path) {
  return decode_label_mask_pgm(read_file(path));
}

std::string encode_label_mask_pgm(const LabelMask& mask) {
  for (const auto v : mask.values()) {
    if (v >= kLabelCount) {
      throw LabelError("cannot encode label " + std::to_string(v));
    }
  }
  std::string out = "P5\n" + std::to_string(mask.cols()) + " " + std::to_string(mask.rows()) +
                    "\n255\n";
  const auto raster = mask.values();
  out.append(reinterpret_cast<const char*>(raster.data()), raster.size());
  return out;
}

void save_label_mask_pgm(const LabelMask& mask, const std::filesystem::path& path) {
  write_file(path, encode_label_mask_pgm(mask));
}

DatasetSplit split_dataset(std::span<const std::string> ids, SplitFractions fractions,
                           std::uint64_t seed) {
  if (ids.empty()) {
    throw EmptyDatasetError("cannot split an empty dataset");
  }
  if (fractions.train < 0.0 || fractions.val < 0.0 || fractions.test < 0.0 ||
      std::abs(fractions.train + fractions.val + fractions.test - 1.0) > 1e-9) {
    throw ConfigError("split fractions must be non-negative and sum to 1");
  }
  const std::size_t n = ids.size();
  const auto dn = static_cast<double>(n);
  const auto n_val = std::min(n, static_cast<std::size_t>(std::llround(dn * fractions.val)));
  const auto n_test =
      std::min(n - n_val, static_cast<std::size_t>(std::llround(dn * fractions.test)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(i + 1)]);
  }

  const auto take = [&](std::size_t first, std::size_t count) {
    std::vector<std::size_t> picked(order.begin() + static_cast<std::ptrdiff_t>(first),
                                    order.begin() + static_cast<std::ptrdiff_t>(first + count));
    std::sort(picked.begin(), picked.end());
    std::vector<std::string> out;
    out.reserve(count);
    for (const auto i : picked) {
      out.push_back(ids[i]);
    }
    return out;
  };

  DatasetSplit split;
  split.val_ids = take(0, n_val);
  split.test_ids = take(n_val, n_test);
  split.train_ids = take(n_val + n_test, n - n_val - n_test);
  return split;
}

}  // namespace jetseg
