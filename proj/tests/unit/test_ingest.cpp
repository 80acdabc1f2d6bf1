#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "jetseg/errors.hpp"
#include "jetseg/ingest.hpp"
#include "jetseg/random.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

namespace jetseg {
namespace {

TEST(TemperatureCsv, ParsesTwoByTwo) {
  const auto f = parse_temperature_csv("300,300\n800,1200\n", "f");
  EXPECT_EQ(f.rows(), 2);
  EXPECT_EQ(f.cols(), 2);
  const std::vector<double> expected{300, 300, 800, 1200};
  EXPECT_TRUE(std::equal(f.kelvin.values().begin(), f.kelvin.values().end(), expected.begin()));
  EXPECT_EQ(f.frame_id, "f");
}

TEST(TemperatureCsv, RaggedRowsAreFormatErrors) {
  EXPECT_THROW(parse_temperature_csv("300,300\n800\n"), FormatError);
  EXPECT_THROW(parse_temperature_csv(""), FormatError);
  EXPECT_THROW(parse_temperature_csv("300,300\n\n"), FormatError);
}

TEST(TemperatureCsv, BadValuesReportPosition) {
  try {
    parse_temperature_csv("300,300\n800,-5\n");
    FAIL() << "expected ValueError";
  } catch (const ValueError& e) {
    EXPECT_EQ(e.row(), 1);
    EXPECT_EQ(e.col(), 1);
  }
  EXPECT_THROW(parse_temperature_csv("0\n"), ValueError);
  EXPECT_THROW(parse_temperature_csv("abc\n"), ValueError);
  EXPECT_THROW(parse_temperature_csv("inf\n"), ValueError);
  EXPECT_THROW(parse_temperature_csv("nan\n"), ValueError);
  EXPECT_THROW(parse_temperature_csv("300 \n"), ValueError);
}

TEST(TemperatureCsv, WriterRoundTripsBitExactly) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = 1 + static_cast<int>(rng.below(8));
    const int cols = 1 + static_cast<int>(rng.below(8));
    KelvinGrid g(rows, cols);
    for (auto& v : g.values()) {
      v = rng.uniform(1e-3, 5000.0);
    }
    g(0, 0) = std::numeric_limits<double>::denorm_min();
    const TemperatureField field{g, "x"};
    const auto back = parse_temperature_csv(format_temperature_csv(field), "x");
    ASSERT_EQ(back.kelvin, field.kelvin);
  }
}

TEST(TemperatureCsv, LoadUsesFileStemAsFrameId) {
  testing::TempDir dir;
  write_file(dir / "frame_7.csv", "900,901\n");
  const auto f = load_temperature_csv(dir / "frame_7.csv");
  EXPECT_EQ(f.frame_id, "frame_7");
  EXPECT_EQ(f.cols(), 2);
}

TEST(LabelPgm, SingleCentralPixelIsOneByteBody) {
  LabelMask m(1, 1, kCentral);
  const auto bytes = encode_label_mask_pgm(m);
  EXPECT_EQ(bytes, std::string("P5\n1 1\n255\n\x03", 12));
}

TEST(LabelPgm, HeaderOrderIsColsThenRows) {
  LabelMask m(2, 3);
  EXPECT_EQ(encode_label_mask_pgm(m).substr(0, 10), "P5\n3 2\n255");
}

TEST(LabelPgm, RoundTripIsIdentity) {
  Rng rng(5);
  testing::TempDir dir;
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = testing::random_mask(rng, 1 + static_cast<int>(rng.below(40)),
                                        1 + static_cast<int>(rng.below(40)), 3);
    save_label_mask_pgm(m, dir / "m.pgm");
    ASSERT_EQ(load_label_mask_pgm(dir / "m.pgm"), m);
    ASSERT_EQ(encode_label_mask_pgm(decode_label_mask_pgm(encode_label_mask_pgm(m))),
              encode_label_mask_pgm(m));
  }
}

TEST(LabelPgm, RejectsBadInput) {
  EXPECT_THROW(decode_label_mask_pgm(std::string("P5\n1 1\n255\n\x07", 12)), LabelError);
  EXPECT_THROW(decode_label_mask_pgm(std::string("P2\n1 1\n255\n\x01", 12)), FormatError);
  EXPECT_THROW(decode_label_mask_pgm(std::string("P5\n1 1\n3\n\x01", 10)), FormatError);
  EXPECT_THROW(decode_label_mask_pgm(std::string("P5\n2 1\n255\n\x01", 12)), FormatError);
  EXPECT_THROW(decode_label_mask_pgm("P5\n"), FormatError);
}

TEST(LabelPgm, AcceptsHeaderComments) {
  constexpr char kText[] = "P5\n# made by hand\n2 1\n255\n\x01\x02";
  const auto m = decode_label_mask_pgm(std::string(kText, sizeof(kText) - 1));
  EXPECT_EQ(m.cols(), 2);
  EXPECT_EQ(m(0, 1), 2);
}

TEST(DatasetSplit, EightyTenTenSplitOf201Images) {
  std::vector<std::string> ids;
  for (int i = 0; i < 201; ++i) {
    ids.push_back("img" + std::to_string(i));
  }
  const auto s = split_dataset(ids, {}, 1);
  EXPECT_EQ(s.train_ids.size(), 161U);
  EXPECT_EQ(s.val_ids.size(), 20U);
  EXPECT_EQ(s.test_ids.size(), 20U);
}

TEST(DatasetSplit, AllTrainWhenOtherFractionsAreZero) {
  std::vector<std::string> ids{"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
  const auto s = split_dataset(ids, {1.0, 0.0, 0.0}, 9);
  EXPECT_EQ(s.train_ids, ids);
  EXPECT_TRUE(s.val_ids.empty());
  EXPECT_TRUE(s.test_ids.empty());
}

TEST(DatasetSplit, DeterministicPartition) {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = 1 + rng.below(60);
    std::vector<std::string> ids;
    for (std::uint64_t i = 0; i < n; ++i) {
      ids.push_back(std::to_string(i));
    }
    const double a = rng.uniform();
    const double b = rng.uniform() * (1.0 - a);
    const SplitFractions f{a, b, 1.0 - a - b};
    const auto s1 = split_dataset(ids, f, trial);
    const auto s2 = split_dataset(ids, f, trial);
    ASSERT_EQ(s1.train_ids, s2.train_ids);
    ASSERT_EQ(s1.val_ids, s2.val_ids);
    std::multiset<std::string> all(s1.train_ids.begin(), s1.train_ids.end());
    all.insert(s1.val_ids.begin(), s1.val_ids.end());
    all.insert(s1.test_ids.begin(), s1.test_ids.end());
    ASSERT_EQ(all, std::multiset<std::string>(ids.begin(), ids.end()));
    ASSERT_EQ(all.size(), ids.size());
  }
}

TEST(DatasetSplit, Errors) {
  const std::vector<std::string> none;
  EXPECT_THROW(split_dataset(none, {}, 0), EmptyDatasetError);
  const std::vector<std::string> ids{"a"};
  EXPECT_THROW(split_dataset(ids, {0.5, 0.2, 0.2}, 0), ConfigError);
}

TEST(Calibration, Validation) {
  Calibration cal{0.05, 10, 5};
  EXPECT_NO_THROW(cal.validate(20, 10));
  EXPECT_THROW(cal.validate(10, 10), BoundsError);
  cal.meters_per_pixel = 0.0;
  EXPECT_THROW(cal.validate(20, 10), ConfigError);
}

TEST(Calibration, FromConfig) {
  const auto cfg = KeyValueConfig::parse("meters_per_pixel = 0.02\nnozzle_row = 9\nnozzle_col = 4\n");
  const auto cal = calibration_from_config(cfg);
  EXPECT_DOUBLE_EQ(cal.meters_per_pixel, 0.02);
  EXPECT_EQ(cal.nozzle_row, 9);
  EXPECT_EQ(cal.flame_boundary_kelvin, 800.0);
  EXPECT_THROW(calibration_from_config(KeyValueConfig::parse("nozzle_row = 1\n")), ConfigError);
}

TEST(ExperimentMeta, DiameterMustBeBelowOneMetre) {
  const auto ok = KeyValueConfig::parse(
      "pipe_outlet_diameter = 0.01275\nwind_speed = 1.5\nambient_temperature = 20\n"
      "fuel_velocity_min = 10\nfuel_velocity_max = 300\nimage_count = 100\n");
  EXPECT_NO_THROW(experiment_from_config(ok));
  auto bad = ok;
  bad.set("pipe_outlet_diameter", "1.5");
  EXPECT_THROW(experiment_from_config(bad), ConfigError);
}

}  // namespace
}  // namespace jetseg
