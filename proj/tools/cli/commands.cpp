#include "cli/commands.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "cli/frames.hpp"
#include "jetseg/chanvese.hpp"
#include "jetseg/clustering.hpp"
#include "jetseg/config.hpp"
#include "jetseg/errors.hpp"
#include "jetseg/geometry.hpp"
#include "jetseg/ingest.hpp"
#include "jetseg/metrics.hpp"
#include "jetseg/preprocess.hpp"
#include "jetseg/stats.hpp"
#include "jetseg/synth.hpp"
#include "jetseg/threshold.hpp"

namespace jetseg::cli {

namespace {

using Clock = std::chrono::steady_clock;

KeyValueConfig load_config(const CommonOptions& common) {
  return common.config ? KeyValueConfig::load(*common.config) : KeyValueConfig{};
}

// Per-frame failure messages, printed in frame order once all work is done.
int report_failures(const std::vector<FrameFile>& frames,
                    const std::vector<std::optional<std::string>>& failures, std::ostream& err) {
  int status = kExitOk;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (failures[i]) {
      err << "frame " << frames[i].id << ": " << *failures[i] << '\n';
      status = kExitData;
    }
  }
  return status;
}

std::string bool_text(bool v) { return v ? "true" : "false"; }

// --- segment ---------------------------------------------------------------

Band band_from_config(const KeyValueConfig& cfg, const std::string& key, Band fallback) {
  if (!cfg.has(key)) {
    return fallback;
  }
  const auto values = cfg.get_doubles(key);
  if (values.size() != 2 || values[0] != std::floor(values[0]) || values[1] != std::floor(values[1])) {
    throw ConfigError(key + " needs two integers lo,hi");
  }
  return {static_cast<int>(values[0]), static_cast<int>(values[1])};
}

ChanVeseParams chanvese_from_config(const KeyValueConfig& cfg, const std::string& zone,
                                    ChanVeseParams p) {
  const std::string prefix = "chanvese." + zone + ".";
  p.mu = cfg.get_double(prefix + "mu", p.mu);
  p.lambda1 = cfg.get_double(prefix + "lambda1", p.lambda1);
  p.lambda2 = cfg.get_double(prefix + "lambda2", p.lambda2);
  p.tolerance = cfg.get_double(prefix + "tolerance", p.tolerance);
  p.max_iter = static_cast<int>(cfg.get_int("chanvese.max_iter", p.max_iter));
  p.dt = cfg.get_double("chanvese.dt", p.dt);
  p.validate();
  return p;
}

struct SegmentSettings {
  IntensityRange range;
  bool auto_bands = false;
  ThresholdBands bands;
  AutoBandsOptions auto_options;
  KMeansOptions kmeans;
  GmmOptions gmm;
  ChanVeseZoneParams chanvese;
};

SegmentSettings segment_settings(const KeyValueConfig& cfg, std::uint64_t seed) {
  SegmentSettings s;
  s.range.t_min = cfg.get_double("intensity.t_min", s.range.t_min);
  s.range.t_max = cfg.get_double("intensity.t_max", s.range.t_max);
  if (!(s.range.t_min < s.range.t_max)) {
    throw ConfigError("intensity.t_min must be below intensity.t_max");
  }
  s.auto_bands = cfg.get_bool("threshold.auto", false);
  s.bands.outer = band_from_config(cfg, "threshold.outer", s.bands.outer);
  s.bands.middle = band_from_config(cfg, "threshold.middle", s.bands.middle);
  s.bands.central = band_from_config(cfg, "threshold.central", s.bands.central);
  s.bands.validate();
  s.auto_options.median_radius =
      static_cast<int>(cfg.get_int("threshold.median_radius", s.auto_options.median_radius));
  s.auto_options.smoothing_radius =
      static_cast<int>(cfg.get_int("threshold.smoothing_radius", s.auto_options.smoothing_radius));
  s.auto_options.min_prominence =
      cfg.get_double("threshold.min_prominence", s.auto_options.min_prominence);

  s.kmeans.k = static_cast<int>(cfg.get_int("kmeans.k", s.kmeans.k));
  s.kmeans.epsilon = cfg.get_double("kmeans.epsilon", s.kmeans.epsilon);
  s.kmeans.max_iter = static_cast<int>(cfg.get_int("kmeans.max_iter", s.kmeans.max_iter));
  s.kmeans.seed = seed;
  s.gmm.components = static_cast<int>(cfg.get_int("gmm.components", s.gmm.components));
  s.gmm.max_iter = static_cast<int>(cfg.get_int("gmm.max_iter", s.gmm.max_iter));
  s.gmm.tol = cfg.get_double("gmm.tol", s.gmm.tol);
  s.gmm.seed = seed;
  s.chanvese.outer = chanvese_from_config(cfg, "outer", s.chanvese.outer);
  s.chanvese.middle = chanvese_from_config(cfg, "middle", s.chanvese.middle);
  s.chanvese.central = chanvese_from_config(cfg, "central", s.chanvese.central);
  return s;
}

struct SegmentOutcome {
  int iterations = 0;
  bool converged = true;
  bool degenerate = false;
  double seconds = 0.0;
};

LabelMask segment_one(const IntensityImage& image, const std::string& method,
                      const SegmentSettings& s, const ThresholdBands& bands,
                      SegmentOutcome& outcome) {
  if (method == "threshold") {
    return threshold_segment(image, bands);
  }
  if (method == "kmeans") {
    auto r = kmeans_segment(image, s.kmeans);
    outcome.iterations = r.model.iterations;
    outcome.converged = r.model.converged;
    return std::move(r.mask);
  }
  if (method == "gmm") {
    auto r = gmm_segment(image, s.gmm);
    outcome.iterations = r.model.iterations;
    outcome.converged = r.model.converged;
    return std::move(r.mask);
  }
  auto r = chanvese_segment(image, s.chanvese);
  outcome.iterations = r.zones[0].iterations + r.zones[1].iterations + r.zones[2].iterations;
  outcome.converged = r.converged;
  outcome.degenerate = r.degenerate;
  return std::move(r.mask);
}

std::string bands_config_text(const AutoBandsResult& r) {
  const auto band = [](Band b) { return std::to_string(b.lo) + "," + std::to_string(b.hi); };
  std::ostringstream os;
  os << "threshold.outer = " << band(r.bands.outer) << '\n'
     << "threshold.middle = " << band(r.bands.middle) << '\n'
     << "threshold.central = " << band(r.bands.central) << '\n'
     << "threshold.auto_fallback = " << bool_text(r.fallback) << '\n';
  return os.str();
}

// --- mask directories ------------------------------------------------------

struct MaskPairs {
  std::vector<FrameFile> pred;
  std::vector<FrameFile> truth;
};

// Frames present in both directories; ids missing from either side are
// listed on `err` and make the result empty.
std::optional<MaskPairs> pair_masks(const std::filesystem::path& pred_dir,
                                    const std::filesystem::path& truth_dir, std::ostream& err) {
  auto pred = list_frames(pred_dir, ".pgm");
  auto truth = list_frames(truth_dir, ".pgm");
  std::vector<std::string> missing_pred;
  std::vector<std::string> missing_truth;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < pred.size() || j < truth.size()) {
    if (j == truth.size() || (i < pred.size() && pred[i].id < truth[j].id)) {
      missing_truth.push_back(pred[i++].id);
    } else if (i == pred.size() || truth[j].id < pred[i].id) {
      missing_pred.push_back(truth[j++].id);
    } else {
      ++i;
      ++j;
    }
  }
  if (missing_pred.empty() && missing_truth.empty()) {
    return MaskPairs{std::move(pred), std::move(truth)};
  }
  for (const auto& id : missing_pred) {
    err << "missing prediction for frame " << id << '\n';
  }
  for (const auto& id : missing_truth) {
    err << "missing truth for frame " << id << '\n';
  }
  return std::nullopt;
}

std::map<std::string, double> read_timing(const std::filesystem::path& path) {
  std::map<std::string, double> times;
  std::istringstream in(read_file(path));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto first = line.find(',');
    const auto last = line.rfind(',');
    if (first == std::string::npos) {
      throw FormatError("malformed timing row: " + line);
    }
    times[line.substr(0, first)] = std::stod(line.substr(last + 1));
  }
  return times;
}

// --- error files -----------------------------------------------------------

struct ErrorFile {
  std::vector<std::string> ids;
  std::vector<double> values;
};

// Two-column CSV "id,value" with a header row.
ErrorFile read_error_file(const std::filesystem::path& path) {
  ErrorFile f;
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(path.string() + ": empty error file");
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw FormatError(path.string() + ": line " + std::to_string(line_no) +
                        " needs exactly two fields");
    }
    std::size_t used = 0;
    double v = 0.0;
    const std::string text = line.substr(comma + 1);
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || text.empty() || !std::isfinite(v)) {
      throw ValueError(path.string() + ": bad value '" + text + "' on line " +
                       std::to_string(line_no));
    }
    f.ids.push_back(line.substr(0, comma));
    f.values.push_back(v);
  }
  return f;
}

// --- geometry --------------------------------------------------------------

Calibration calibration_for(const CommonOptions& common) {
  return calibration_from_config(load_config(common));
}

struct GeometryRow {
  std::optional<FlameGeometry> geometry;
  std::optional<std::string> failure;
};

std::vector<GeometryRow> geometry_rows(const std::vector<FrameFile>& frames,
                                       const Calibration& cal, int jobs) {
  std::vector<GeometryRow> rows(frames.size());
  parallel_for(frames.size(), jobs, [&](std::size_t i) {
    try {
      const auto mask = load_label_mask_pgm(frames[i].path);
      rows[i].geometry = extract_features(flame_region(mask), cal);
    } catch (const Error& e) {
      rows[i].failure = e.what();
    }
  });
  return rows;
}

int collect_geometry_failures(const std::vector<FrameFile>& frames,
                              const std::vector<GeometryRow>& rows, std::ostream& err) {
  std::vector<std::optional<std::string>> failures(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    failures[i] = rows[i].failure;
  }
  return report_failures(frames, failures, err);
}

}  // namespace

int cmd_segment(const SegmentArgs& args, std::ostream& /*out*/, std::ostream& err) {
  const auto cfg = load_config(args.common);
  const auto settings = segment_settings(cfg, args.common.seed.value_or(0));
  const auto frames = list_frames(args.input, ".csv");
  if (frames.empty()) {
    err << "warning: no temperature CSV frames in " << args.input.string() << '\n';
    return kExitOk;
  }
  const auto& out_dir = *args.common.out;
  std::filesystem::create_directories(out_dir);

  std::vector<std::optional<IntensityImage>> images(frames.size());
  std::vector<std::optional<std::string>> failures(frames.size());
  parallel_for(frames.size(), args.common.jobs, [&](std::size_t i) {
    try {
      images[i] = to_intensity(load_temperature_csv(frames[i].path), settings.range);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });

  ThresholdBands bands = settings.bands;
  if (args.method == "threshold" && settings.auto_bands) {
    std::vector<IntensityImage> loaded;
    for (const auto& img : images) {
      if (img) {
        loaded.push_back(*img);
      }
    }
    if (!loaded.empty()) {
      const auto fitted = auto_bands(loaded, settings.auto_options);
      bands = fitted.bands;
      write_file(out_dir / "bands.cfg", bands_config_text(fitted));
    }
  }

  std::vector<SegmentOutcome> outcomes(frames.size());
  parallel_for(frames.size(), args.common.jobs, [&](std::size_t i) {
    if (!images[i]) {
      return;
    }
    try {
      const auto start = Clock::now();
      const auto mask = segment_one(*images[i], args.method, settings, bands, outcomes[i]);
      outcomes[i].seconds = std::chrono::duration<double>(Clock::now() - start).count();
      save_label_mask_pgm(mask, out_dir / (frames[i].id + ".pgm"));
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });

  std::ostringstream log;
  log << "frame_id,method,iterations,converged,degenerate\n";
  std::ostringstream timing;
  timing << "frame_id,method,seconds\n";
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (failures[i]) {
      continue;
    }
    log << frames[i].id << ',' << args.method << ',' << outcomes[i].iterations << ','
        << bool_text(outcomes[i].converged) << ',' << bool_text(outcomes[i].degenerate) << '\n';
    timing << frames[i].id << ',' << args.method << ',' << format_real(outcomes[i].seconds) << '\n';
  }
  write_file(out_dir / "segment.csv", log.str());
  if (args.common.timing) {
    write_file(out_dir / "timing.csv", timing.str());
  }
  return report_failures(frames, failures, err);
}

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err) {
  const auto pairs = pair_masks(args.pred, args.truth, err);
  if (!pairs) {
    return kExitData;
  }
  const auto& frames = pairs->pred;
  if (frames.empty()) {
    err << "warning: no masks to evaluate\n";
    return kExitOk;
  }
  std::vector<std::optional<ImageMetrics>> rows(frames.size());
  std::vector<std::optional<std::string>> failures(frames.size());
  parallel_for(frames.size(), args.common.jobs, [&](std::size_t i) {
    try {
      rows[i] = evaluate_pair(load_label_mask_pgm(frames[i].path),
                              load_label_mask_pgm(pairs->truth[i].path), frames[i].id);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });

  const auto timing_path = args.pred / "timing.csv";
  std::optional<std::map<std::string, double>> times;
  if (std::filesystem::exists(timing_path)) {
    times = read_timing(timing_path);
  }

  std::vector<ImageMetrics> good;
  std::vector<double> seconds;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i]) {
      good.push_back(*rows[i]);
      if (times) {
        const auto it = times->find(frames[i].id);
        seconds.push_back(it == times->end() ? std::nan("") : it->second);
      }
    }
  }

  std::ostringstream csv;
  csv << "frame_id,hausdorff,mean_jaccard,f_measure,ari,mutual_information,kappa,mae,mse,psnr";
  if (times) {
    csv << ",time_s";
  }
  csv << '\n';
  const auto write_row = [&](const ImageMetrics& m, std::optional<double> t) {
    csv << m.frame_id << ',' << format_real(m.hausdorff) << ',' << format_real(m.mean_jaccard)
        << ',' << format_real(m.f_measure) << ',' << format_real(m.ari) << ','
        << format_real(m.mutual_information) << ',' << format_real(m.kappa) << ','
        << format_real(m.mae) << ',' << format_real(m.mse) << ',' << format_real(m.psnr);
    if (times) {
      csv << ',' << (t ? format_real(*t) : std::string{});
    }
    csv << '\n';
  };
  for (std::size_t i = 0; i < good.size(); ++i) {
    write_row(good[i], times ? std::optional<double>(seconds[i]) : std::nullopt);
  }
  if (!good.empty()) {
    const auto agg = aggregate(good);
    double total = 0.0;
    double mean_t = 0.0;
    double std_t = 0.0;
    if (times) {
      for (const double s : seconds) {
        total += s;
      }
      mean_t = total / static_cast<double>(seconds.size());
      for (const double s : seconds) {
        std_t += (s - mean_t) * (s - mean_t);
      }
      std_t = std::sqrt(std_t / static_cast<double>(seconds.size()));
    }
    write_row(agg.mean, mean_t);
    write_row(agg.stddev, std_t);
    if (times) {
      csv << "total,,,,,,,,,," << format_real(total) << '\n';
    }
  }
  emit(args.common.out, "metrics.csv", csv.str(), out);
  return report_failures(frames, failures, err);
}

int cmd_geometry(const GeometryArgs& args, std::ostream& out, std::ostream& err) {
  const auto cal = calibration_for(args.common);
  const auto frames = list_frames(args.masks, ".pgm");
  const auto rows = geometry_rows(frames, cal, args.common.jobs);
  std::ostringstream csv;
  csv << "frame_id,L_m,S_m,A_m2,component_pixel_count,flags\n";
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!rows[i].geometry) {
      continue;
    }
    const auto& g = *rows[i].geometry;
    csv << frames[i].id << ',' << format_real(g.height_m) << ',' << format_real(g.liftoff_m) << ','
        << format_real(g.area_m2) << ',' << g.component_pixel_count << ','
        << (g.liftoff_clamped ? "liftoff_clamped" : "none") << '\n';
  }
  emit(args.common.out, "geometry.csv", csv.str(), out);
  return collect_geometry_failures(frames, rows, err);
}

int cmd_stats(const StatsArgs& args, std::ostream& out, std::ostream& err) {
  const auto a = read_error_file(args.a);
  const auto b = read_error_file(args.b);
  if (a.ids != b.ids) {
    throw ShapeError("error files list different experiment ids");
  }
  const auto test = wilcoxon_signed_rank({a.values, b.values, {}}, args.alpha);
  std::string pearson = "nan";
  try {
    pearson = format_real(pearson_correlation(a.values, b.values));
  } catch (const Error& e) {
    err << "warning: pearson correlation: " << e.what() << '\n';
  }
  std::ostringstream csv;
  csv << "statistic,w_plus,w_minus,p_value,n,n_effective,method,alpha,reject,pearson_r\n"
      << format_real(test.statistic) << ',' << format_real(test.w_plus) << ','
      << format_real(test.w_minus) << ',' << format_real(test.p_value) << ',' << a.values.size()
      << ',' << test.n_effective << ',' << to_string(test.method) << ','
      << format_real(test.alpha) << ',' << bool_text(test.reject) << ',' << pearson << '\n';
  emit(args.common.out, "wilcoxon.csv", csv.str(), out);

  if (args.common.out) {
    std::ostringstream qq;
    qq << "sample,index,theoretical,standardized\n";
    const auto add = [&](const char* name, const std::vector<double>& values) {
      try {
        const auto points = qq_points(values);
        for (std::size_t i = 0; i < points.size(); ++i) {
          qq << name << ',' << i + 1 << ',' << format_real(points[i].theoretical) << ','
             << format_real(points[i].sample) << '\n';
        }
      } catch (const Error& e) {
        err << "warning: Q-Q points for sample " << name << ": " << e.what() << '\n';
      }
    };
    add("a", a.values);
    add("b", b.values);
    emit(args.common.out, "qq.csv", qq.str(), out);
  }
  return kExitOk;
}

int cmd_weights(const WeightsArgs& args, std::ostream& out, std::ostream& err) {
  const auto frames = list_frames(args.masks, ".pgm");
  if (frames.empty()) {
    throw EmptyDatasetError("no masks in " + args.masks.string());
  }
  std::vector<LabelMask> masks(frames.size());
  std::vector<std::optional<std::string>> failures(frames.size());
  parallel_for(frames.size(), args.common.jobs, [&](std::size_t i) {
    try {
      masks[i] = load_label_mask_pgm(frames[i].path);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });
  if (report_failures(frames, failures, err) != kExitOk) {
    return kExitData;
  }
  const auto w = compute_class_weights(masks, args.c);
  static constexpr const char* kNames[kLabelCount] = {"background", "outer", "middle", "central"};
  std::ostringstream csv;
  csv << "label,name,propensity,weight\n";
  for (int k = 0; k < kLabelCount; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    csv << k << ',' << kNames[k] << ',' << format_real(w.propensity[idx]) << ','
        << format_real(w.weight[idx]) << '\n';
  }
  emit(args.common.out, "weights.csv", csv.str(), out);
  return kExitOk;
}

int cmd_synth(const SynthArgs& args, std::ostream& /*out*/, std::ostream& /*err*/) {
  auto base = flame_spec_from_config(load_config(args.common));
  if (args.common.seed) {
    base.seed = *args.common.seed;
  }
  const auto& out_dir = *args.common.out;
  std::filesystem::create_directories(out_dir / "fields");
  std::filesystem::create_directories(out_dir / "masks");

  const auto count = static_cast<std::size_t>(args.count);
  std::vector<std::string> ids(count);
  std::vector<FlameGeometry> truths(count);
  parallel_for(count, args.common.jobs, [&](std::size_t i) {
    auto spec = base;
    spec.seed = base.seed + i;
    auto result = generate_flame(spec);
    std::array<char, 32> id{};
    std::snprintf(id.data(), id.size(), "flame_%04zu", i);
    ids[i] = id.data();
    result.field.frame_id = ids[i];
    save_temperature_csv(result.field, out_dir / "fields" / (ids[i] + ".csv"));
    save_label_mask_pgm(result.truth_mask, out_dir / "masks" / (ids[i] + ".pgm"));
    truths[i] = result.truth_geometry;
  });

  KeyValueConfig cal;
  cal.set("meters_per_pixel", format_real(base.mpp));
  cal.set("nozzle_row", std::to_string(base.nozzle_row));
  cal.set("nozzle_col", std::to_string(base.nozzle_col));
  cal.set("flame_boundary_kelvin", format_real(kFlameBoundaryKelvin));
  write_file(out_dir / "calibration.cfg", cal.to_string());
  write_file(out_dir / "spec.cfg", flame_spec_to_config(base).to_string());

  std::ostringstream truth;
  truth << "frame_id,L_m,S_m,A_m2,seed\n";
  for (std::size_t i = 0; i < count; ++i) {
    truth << ids[i] << ',' << format_real(truths[i].height_m) << ','
          << format_real(truths[i].liftoff_m) << ',' << format_real(truths[i].area_m2) << ','
          << base.seed + i << '\n';
  }
  write_file(out_dir / "truth.csv", truth.str());
  return kExitOk;
}

int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err) {
  const auto cal = calibration_for(args.common);
  const auto pairs = pair_masks(args.pred, args.truth, err);
  if (!pairs) {
    return kExitData;
  }
  const auto pred = geometry_rows(pairs->pred, cal, args.common.jobs);
  const auto truth = geometry_rows(pairs->truth, cal, args.common.jobs);
  int status = collect_geometry_failures(pairs->pred, pred, err);
  status = std::max(status, collect_geometry_failures(pairs->truth, truth, err));

  struct Feature {
    const char* name;
    const char* unit;
    double FlameGeometry::*member;
  };
  static constexpr Feature kFeatures[] = {{"L", "m", &FlameGeometry::height_m},
                                          {"S", "m", &FlameGeometry::liftoff_m},
                                          {"A", "m2", &FlameGeometry::area_m2}};

  std::ostringstream features;
  features << "frame_id,L_true,L_pred,S_true,S_pred,A_true,A_pred\n";
  std::vector<std::string> ids;
  std::vector<ErrorSeries> series(3);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!pred[i].geometry || !truth[i].geometry) {
      continue;
    }
    ids.push_back(pairs->pred[i].id);
    features << pairs->pred[i].id;
    for (std::size_t f = 0; f < 3; ++f) {
      const double x = (*truth[i].geometry).*kFeatures[f].member;
      const double y = (*pred[i].geometry).*kFeatures[f].member;
      series[f].truth.push_back(x);
      series[f].predicted.push_back(y);
      features << ',' << format_real(x) << ',' << format_real(y);
    }
    features << '\n';
  }

  std::ostringstream summary;
  summary << "feature,unit,n,mape,rmspe,mape_matched,rmspe_matched\n";
  for (std::size_t f = 0; f < 3; ++f) {
    const auto& s = series[f];
    summary << kFeatures[f].name << ',' << kFeatures[f].unit << ',' << s.truth.size();
    const auto guarded = [&](double (*metric)(const ErrorSeries&)) {
      try {
        return format_real(metric(s));
      } catch (const Error& e) {
        err << "warning: feature " << kFeatures[f].name << ": " << e.what() << '\n';
        return std::string("nan");
      }
    };
    summary << ',' << guarded(mape) << ',' << guarded(rmspe) << ',' << guarded(mape_matched) << ','
            << guarded(rmspe_matched) << '\n';
  }
  emit(args.common.out, "report.csv", summary.str(), out);

  if (args.common.out) {
    emit(args.common.out, "features.csv", features.str(), out);
    for (std::size_t f = 0; f < 3; ++f) {
      std::ostringstream per_frame;
      per_frame << "id,ape_percent\n";
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const double x = series[f].truth[i];
        if (x == 0.0) {
          continue;
        }
        per_frame << ids[i] << ',' << format_real(std::abs(x - series[f].predicted[i]) / x * 100.0)
                  << '\n';
      }
      emit(args.common.out, std::string("errors_") + kFeatures[f].name + ".csv", per_frame.str(),
           out);
    }
  }
  return status;
}

}  // namespace jetseg::cli
