#include <algorithm>
#include <filesystem>
#include <ostream>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "jetseg/errors.hpp"

namespace jetseg::cli {

namespace {

void add_common(CLI::App* sub, CommonOptions& c, bool wants_config) {
  if (wants_config) {
    sub->add_option("--config", c.config, "key = value configuration file")
        ->check(CLI::ExistingFile);
  }
  sub->add_option("--seed", c.seed, "base random seed");
  sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1, 256));
  sub->add_option("--out", c.out, "output directory");
  sub->add_flag("--timing", c.timing, "record wall-clock time per frame");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Infrared jet-flame segmentation, geometry and evaluation toolkit", "jetseg"};
  app.require_subcommand(1);

  SegmentArgs segment;
  auto* seg = app.add_subcommand("segment", "segment temperature CSV frames into label masks");
  add_common(seg, segment.common, true);
  seg->add_option("--input", segment.input, "directory of temperature CSV frames")
      ->required()
      ->check(CLI::ExistingDirectory);
  seg->add_option("--method", segment.method, "threshold | kmeans | gmm | chanvese")
      ->check(CLI::IsMember(kMethods));
  seg->get_option("--out")->required();

  EvaluateArgs evaluate;
  auto* eva = app.add_subcommand("evaluate", "compare predicted masks with truth masks");
  add_common(eva, evaluate.common, false);
  eva->add_option("--pred", evaluate.pred, "predicted mask directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  eva->add_option("--truth", evaluate.truth, "truth mask directory")
      ->required()
      ->check(CLI::ExistingDirectory);

  GeometryArgs geometry;
  auto* geo = app.add_subcommand("geometry", "flame height, lift-off and area per mask");
  add_common(geo, geometry.common, true);
  geo->get_option("--config")->required();
  geo->add_option("--masks", geometry.masks, "mask directory")
      ->required()
      ->check(CLI::ExistingDirectory);

  StatsArgs stats;
  auto* sta = app.add_subcommand("stats", "signed-rank test and Q-Q points for two error files");
  add_common(sta, stats.common, false);
  sta->add_option("--a", stats.a, "first error CSV (id,value)")->required()->check(CLI::ExistingFile);
  sta->add_option("--b", stats.b, "second error CSV (id,value)")->required()->check(CLI::ExistingFile);
  sta->add_option("--alpha", stats.alpha, "significance level")->check(CLI::Range(0.0, 1.0));

  WeightsArgs weights;
  auto* wei = app.add_subcommand("weights", "class weights from mask propensities");
  add_common(wei, weights.common, false);
  wei->add_option("--masks", weights.masks, "mask directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  wei->add_option("--c", weights.c, "weighting constant");

  SynthArgs synth;
  auto* syn = app.add_subcommand("synth", "generate synthetic flames with known geometry");
  add_common(syn, synth.common, true);
  syn->get_option("--out")->required();
  syn->add_option("--count", synth.count, "number of frames")->check(CLI::Range(1, 100000));

  ReportArgs report;
  auto* rep = app.add_subcommand("report", "feature errors of predicted against truth geometry");
  add_common(rep, report.common, true);
  rep->get_option("--config")->required();
  rep->add_option("--pred", report.pred, "predicted mask directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  rep->add_option("--truth", report.truth, "truth mask directory")
      ->required()
      ->check(CLI::ExistingDirectory);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (seg->parsed()) {
      return cmd_segment(segment, out, err);
    }
    if (eva->parsed()) {
      return cmd_evaluate(evaluate, out, err);
    }
    if (geo->parsed()) {
      return cmd_geometry(geometry, out, err);
    }
    if (sta->parsed()) {
      return cmd_stats(stats, out, err);
    }
    if (wei->parsed()) {
      return cmd_weights(weights, out, err);
    }
    if (syn->parsed()) {
      return cmd_synth(synth, out, err);
    }
    return cmd_report(report, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace jetseg::cli
