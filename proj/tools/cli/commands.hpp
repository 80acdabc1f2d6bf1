#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace jetseg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

/// Flags shared by every subcommand.
struct CommonOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  // Directory for output files. CSV-only commands print to stdout without it.
  std::optional<std::filesystem::path> out;
  bool timing = false;
};

struct SegmentArgs {
  CommonOptions common;
  std::filesystem::path input;
  std::string method = "threshold";
};

struct EvaluateArgs {
  CommonOptions common;
  std::filesystem::path pred;
  std::filesystem::path truth;
};

struct GeometryArgs {
  CommonOptions common;  // config holds the calibration
  std::filesystem::path masks;
};

struct StatsArgs {
  CommonOptions common;
  std::filesystem::path a;
  std::filesystem::path b;
  double alpha = 0.1;
};

struct WeightsArgs {
  CommonOptions common;
  std::filesystem::path masks;
  double c = 1.02;
};

struct SynthArgs {
  CommonOptions common;  // config holds the flame description
  int count = 1;  // writes fields/*.csv, masks/*.pgm, calibration.cfg, spec.cfg, truth.csv
};

struct ReportArgs {
  CommonOptions common;  // config holds the calibration
  std::filesystem::path pred;
  std::filesystem::path truth;
};

inline const std::vector<std::string> kMethods{"threshold", "kmeans", "gmm", "chanvese"};

int cmd_segment(const SegmentArgs& args, std::ostream& out, std::ostream& err);
int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err);
int cmd_geometry(const GeometryArgs& args, std::ostream& out, std::ostream& err);
int cmd_stats(const StatsArgs& args, std::ostream& out, std::ostream& err);
int cmd_weights(const WeightsArgs& args, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err);
int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and dispatches.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jetseg::cli
