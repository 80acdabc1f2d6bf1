#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "jetseg/ingest.hpp"
#include "support/temp_dir.hpp"

namespace jetseg {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

struct Invocation {
  int status = 0;
  std::string out;
  std::string err;
};

Invocation invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Invocation r;
  r.status = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
      cells.emplace_back();
    }
    rows.push_back(cells);
  }
  return rows;
}

void save_mask(const LabelMask& mask, const fs::path& p) {
  fs::create_directories(p.parent_path());
  save_label_mask_pgm(mask, p);
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      files[fs::relative(e.path(), dir).string()] = read_text(e.path());
    }
  }
  return files;
}

// Band edges on intensity half-steps so thresholding reproduces the synthetic labels.
constexpr const char* kAlignedSpec =
    "rows = 200\ncols = 100\nmpp = 0.05\nnozzle_row = 190\nnozzle_col = 50\n"
    "liftoff_m = 1.0\nheight_m = 4.0\nmax_width_m = 1.5\npeak_temperature = 1300\n"
    "zone_fractions = 0.3,0.3,0.4\n"
    "intensity.t_min = 302.5\nintensity.t_max = 1577.5\n"
    "threshold.outer = 100,139\nthreshold.middle = 140,169\nthreshold.central = 170,255\n";

class CliTest : public ::testing::Test {
 protected:
  void synth(int count, const std::string& extra = "") {
    write_text(tmp_ / "spec.cfg", std::string(kAlignedSpec) + extra);
    const auto r = invoke({"synth", "--config", (tmp_ / "spec.cfg").string(), "--out",
                           (tmp_ / "data").string(), "--count", std::to_string(count)});
    ASSERT_EQ(r.status, 0) << r.err;
  }

  TempDir tmp_;
};

TEST_F(CliTest, UsageErrors) {
  fs::create_directories(tmp_ / "in");
  EXPECT_EQ(invoke({"segment", "--input", (tmp_ / "in").string(), "--method", "watershed", "--out",
                    (tmp_ / "o").string()})
                .status,
            cli::kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).status, cli::kExitUsage);
  EXPECT_EQ(invoke({"segment", "--method", "threshold"}).status, cli::kExitUsage);
  EXPECT_EQ(invoke({"--help"}).status, cli::kExitOk);
}

TEST_F(CliTest, EmptyInputDirectoryWarns) {
  fs::create_directories(tmp_ / "in");
  const auto r = invoke({"segment", "--input", (tmp_ / "in").string(), "--method", "threshold",
                         "--out", (tmp_ / "o").string()});
  EXPECT_EQ(r.status, cli::kExitOk);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_FALSE(fs::exists(tmp_ / "o") && !fs::is_empty(tmp_ / "o"));
}

TEST_F(CliTest, SynthWritesDataset) {
  synth(3);
  for (const char* id : {"flame_0000", "flame_0001", "flame_0002"}) {
    EXPECT_TRUE(fs::exists(tmp_ / "data" / "fields" / (std::string(id) + ".csv")));
    EXPECT_TRUE(fs::exists(tmp_ / "data" / "masks" / (std::string(id) + ".pgm")));
  }
  const auto truth = csv_rows(read_text(tmp_ / "data" / "truth.csv"));
  ASSERT_EQ(truth.size(), 4U);
  EXPECT_EQ(truth[0][0], "frame_id");
  EXPECT_EQ(truth[1][1], "4");
  EXPECT_EQ(truth[1][2], "1");
  EXPECT_EQ(truth[3][4], "2");
  const auto cal = KeyValueConfig::load(tmp_ / "data" / "calibration.cfg");
  EXPECT_EQ(cal.get_double("meters_per_pixel"), 0.05);
}

TEST_F(CliTest, ThresholdOnNoiselessSynthMatchesTruth) {
  synth(3);
  const auto seg = invoke({"segment", "--input", (tmp_ / "data" / "fields").string(), "--method",
                           "threshold", "--config", (tmp_ / "spec.cfg").string(), "--out",
                           (tmp_ / "pred").string()});
  ASSERT_EQ(seg.status, 0) << seg.err;
  for (const char* id : {"flame_0000", "flame_0001", "flame_0002"}) {
    EXPECT_EQ(read_text(tmp_ / "pred" / (std::string(id) + ".pgm")),
              read_text(tmp_ / "data" / "masks" / (std::string(id) + ".pgm")));
  }
  const auto eval = invoke({"evaluate", "--pred", (tmp_ / "pred").string(), "--truth",
                            (tmp_ / "data" / "masks").string()});
  ASSERT_EQ(eval.status, 0) << eval.err;
  const auto rows = csv_rows(eval.out);
  ASSERT_EQ(rows.size(), 6U);  // header, 3 frames, mean, stddev
  EXPECT_EQ(rows[0][2], "mean_jaccard");
  for (std::size_t i = 1; i <= 3; ++i) {
    EXPECT_EQ(rows[i][1], "0");
    EXPECT_EQ(rows[i][2], "1");
  }
  EXPECT_EQ(rows[4][0], "mean");
  EXPECT_EQ(rows[5][0], "stddev");
}

TEST_F(CliTest, EvaluateSingleFrameAggregateEqualsRow) {
  save_mask(LabelMask(2, 3, {0, 1, 2, 3, 3, 0}), tmp_ / "t" / "a.pgm");
  save_mask(LabelMask(2, 3, {0, 1, 1, 3, 2, 0}), tmp_ / "p" / "a.pgm");
  const auto r = invoke({"evaluate", "--pred", (tmp_ / "p").string(), "--truth",
                         (tmp_ / "t").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 4U);
  for (std::size_t c = 1; c < rows[1].size(); ++c) {
    EXPECT_EQ(rows[2][c], rows[1][c]) << rows[0][c];
    EXPECT_EQ(rows[3][c], "0") << rows[0][c];
  }
}

TEST_F(CliTest, EvaluateHandComputedPair) {
  save_mask(LabelMask(1, 2, {0, 3}), tmp_ / "t" / "x.pgm");
  save_mask(LabelMask(1, 2, {3, 3}), tmp_ / "p" / "x.pgm");
  const auto r = invoke({"evaluate", "--pred", (tmp_ / "p").string(), "--truth",
                         (tmp_ / "t").string(), "--out", (tmp_ / "o").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = csv_rows(read_text(tmp_ / "o" / "metrics.csv"));
  EXPECT_EQ(rows[1][7], "1.5");
  EXPECT_EQ(rows[1][8], "4.5");
  EXPECT_NEAR(std::stod(rows[1][9]), 3.010299956639812, 1e-12);
}

TEST_F(CliTest, EvaluateReportsMissingIds) {
  save_mask(LabelMask(1, 1, {1}), tmp_ / "t" / "a.pgm");
  save_mask(LabelMask(1, 1, {1}), tmp_ / "t" / "b.pgm");
  save_mask(LabelMask(1, 1, {1}), tmp_ / "p" / "a.pgm");
  const auto r = invoke({"evaluate", "--pred", (tmp_ / "p").string(), "--truth",
                         (tmp_ / "t").string()});
  EXPECT_EQ(r.status, cli::kExitData);
  EXPECT_NE(r.err.find("b"), std::string::npos);
}

TEST_F(CliTest, GeometryOnSynthTruthMasks) {
  synth(2);
  const auto r = invoke({"geometry", "--config", (tmp_ / "data" / "calibration.cfg").string(),
                         "--masks", (tmp_ / "data" / "masks").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 3U);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_NEAR(std::stod(rows[i][1]), 4.0, 0.05);
    EXPECT_NEAR(std::stod(rows[i][2]), 1.0, 0.05);
    EXPECT_EQ(rows[i][5], "none");
  }
}

TEST_F(CliTest, UniformMasksGiveEqualWeights) {
  save_mask(LabelMask(2, 2, {0, 1, 2, 3}), tmp_ / "m" / "a.pgm");
  save_mask(LabelMask(1, 4, {3, 2, 1, 0}), tmp_ / "m" / "b.pgm");
  const auto r = invoke({"weights", "--masks", (tmp_ / "m").string(), "--c", "1.02"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 5U);
  for (std::size_t i = 1; i <= 4; ++i) {
    EXPECT_EQ(rows[i][2], "0.25");
    EXPECT_EQ(rows[i][3], rows[1][3]);
  }
}

TEST_F(CliTest, StatsOnErrorFiles) {
  write_text(tmp_ / "a.csv", "id,value\ne1,2\ne2,3\ne3,5\ne4,7\ne5,11\ne6,13\n");
  write_text(tmp_ / "b.csv", "id,value\ne1,1\ne2,1\ne3,1\ne4,1\ne5,1\ne6,2\n");
  const auto r = invoke({"stats", "--a", (tmp_ / "a.csv").string(), "--b",
                         (tmp_ / "b.csv").string(), "--out", (tmp_ / "o").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = csv_rows(read_text(tmp_ / "o" / "wilcoxon.csv"));
  ASSERT_EQ(rows.size(), 2U);
  EXPECT_EQ(rows[1][0], "0");
  EXPECT_EQ(rows[1][3], "0.03125");
  EXPECT_EQ(rows[1][6], "exact");
  EXPECT_EQ(rows[1][8], "true");
  EXPECT_EQ(csv_rows(read_text(tmp_ / "o" / "qq.csv")).size(), 13U);
}

TEST_F(CliTest, StatsOnIdenticalFilesIsDataError) {
  write_text(tmp_ / "a.csv", "id,value\ne1,2\ne2,3\n");
  const auto r = invoke({"stats", "--a", (tmp_ / "a.csv").string(), "--b",
                         (tmp_ / "a.csv").string()});
  EXPECT_EQ(r.status, cli::kExitData);
  EXPECT_NE(r.err.find("zero"), std::string::npos);
}

TEST_F(CliTest, ReportOnPerfectPrediction) {
  synth(2);
  const auto masks = (tmp_ / "data" / "masks").string();
  const auto r = invoke({"report", "--config", (tmp_ / "data" / "calibration.cfg").string(),
                         "--pred", masks, "--truth", masks, "--out", (tmp_ / "o").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto rows = csv_rows(read_text(tmp_ / "o" / "report.csv"));
  ASSERT_EQ(rows.size(), 4U);
  for (std::size_t i = 1; i <= 3; ++i) {
    EXPECT_EQ(rows[i][2], "2");
    EXPECT_EQ(rows[i][3], "0");
    EXPECT_EQ(rows[i][4], "0");
  }
  EXPECT_TRUE(fs::exists(tmp_ / "o" / "errors_L.csv"));
}

TEST_F(CliTest, BadConfigIsDataError) {
  write_text(tmp_ / "bad.cfg", "rows = many\n");
  const auto r = invoke({"synth", "--config", (tmp_ / "bad.cfg").string(), "--out",
                         (tmp_ / "o").string(), "--count", "1"});
  EXPECT_EQ(r.status, cli::kExitData);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, SegmentIsIdenticalSerialAndParallel) {
  synth(4, "noise_sigma = 20\n");
  for (const char* method : {"threshold", "kmeans", "gmm", "chanvese"}) {
    std::vector<std::map<std::string, std::string>> runs;
    for (const char* jobs : {"1", "4", "4"}) {
      const auto out = tmp_ / (std::string(method) + jobs + std::to_string(runs.size()));
      const auto r = invoke({"segment", "--input", (tmp_ / "data" / "fields").string(), "--method",
                             method, "--seed", "11", "--jobs", jobs, "--out", out.string()});
      ASSERT_EQ(r.status, 0) << method << ": " << r.err;
      runs.push_back(snapshot(out));
    }
    EXPECT_EQ(runs[0].size(), 5U) << method;  // 4 masks and segment.csv
    EXPECT_EQ(runs[0], runs[1]) << method;
    EXPECT_EQ(runs[1], runs[2]) << method;
  }
}

}  // namespace
}  // namespace jetseg
