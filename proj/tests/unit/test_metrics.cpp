#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "jetseg/errors.hpp"
#include "jetseg/metrics.hpp"
#include "support/oracles.hpp"

namespace jetseg {
namespace {

using testing::brute_hausdorff;
using testing::overlap_oracle;
using testing::random_mask;
using testing::random_table;

PointSet random_points(Rng& rng, std::size_t n, int extent) {
  PointSet p(n);
  for (auto& q : p) {
    q = Pixel{static_cast<int>(rng.below(static_cast<std::uint64_t>(extent))),
              static_cast<int>(rng.below(static_cast<std::uint64_t>(extent)))};
  }
  return p;
}

ConfusionCounts from_table(const testing::Table& t) {
  ConfusionCounts c;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      c.counts[i][j] = t[i][j];
    }
  }
  return c;
}

TEST(Hausdorff, PointSetExamples) {
  EXPECT_EQ(hausdorff(PointSet{{0, 0}}, PointSet{{3, 4}}), 5.0);
  const PointSet a{{0, 0}, {10, 0}};
  const PointSet b{{0, 0}};
  EXPECT_EQ(directed_hausdorff(a, b), 10.0);
  EXPECT_EQ(directed_hausdorff(b, a), 0.0);
  EXPECT_EQ(hausdorff(a, b), 10.0);
  EXPECT_EQ(hausdorff(a, a), 0.0);
}

TEST(Hausdorff, EmptySetThrows) {
  EXPECT_THROW(hausdorff(PointSet{}, PointSet{{0, 0}}), EmptySetError);
  EXPECT_THROW(directed_hausdorff(PointSet{{0, 0}}, PointSet{}), EmptySetError);
  EXPECT_THROW(hausdorff(BinaryMask(3, 3), BinaryMask(3, 3)), EmptySetError);
}

TEST(Hausdorff, SymmetricAndEqualToBruteForce) {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_points(rng, 1 + rng.below(60), 50);
    const auto b = random_points(rng, 1 + rng.below(60), 50);
    const double h = hausdorff(a, b);
    ASSERT_EQ(h, hausdorff(b, a));
    ASSERT_EQ(h, brute_hausdorff(a, b));
  }
}

TEST(Hausdorff, TriangleInequality) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_points(rng, 1 + rng.below(30), 40);
    const auto b = random_points(rng, 1 + rng.below(30), 40);
    const auto c = random_points(rng, 1 + rng.below(30), 40);
    ASSERT_LE(hausdorff(a, c), hausdorff(a, b) + hausdorff(b, c) + 1e-12);
  }
}

TEST(Hausdorff, MaskTransformMatchesPointSets) {
  Rng rng(8);
  for (int trial = 0; trial < 60; ++trial) {
    const int rows = 1 + static_cast<int>(rng.below(40));
    const int cols = 1 + static_cast<int>(rng.below(40));
    BinaryMask a(rows, cols);
    BinaryMask b(rows, cols);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a.values()[i] = rng.uniform() < 0.1;
      b.values()[i] = rng.uniform() < 0.1;
    }
    a(0, 0) = 1;
    b(rows - 1, cols - 1) = 1;
    PointSet pa;
    PointSet pb;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (a(r, c)) pa.push_back({r, c});
        if (b(r, c)) pb.push_back({r, c});
      }
    }
    ASSERT_EQ(hausdorff(a, b), brute_hausdorff(pa, pb));
  }
}

TEST(MulticlassHausdorff, MeanOfPerClassDistances) {
  LabelMask truth(1, 20);
  LabelMask pred(1, 20);
  truth(0, 0) = 1;
  pred(0, 4) = 1;  // class 1: 4
  truth(0, 10) = 2;
  pred(0, 16) = 2;  // class 2: 6
  EXPECT_EQ(multiclass_hausdorff(pred, truth), 5.0);
}

TEST(MulticlassHausdorff, SingleClassEqualsBinary) {
  Rng rng(2);
  const auto truth = random_mask(rng, 20, 30, 1);
  const auto pred = random_mask(rng, 20, 30, 1);
  const auto pa = class_points(pred, 1);
  const auto pb = class_points(truth, 1);
  ASSERT_FALSE(pa.empty());
  ASSERT_FALSE(pb.empty());
  EXPECT_EQ(multiclass_hausdorff(pred, truth), brute_hausdorff(pa, pb));
  EXPECT_EQ(multiclass_hausdorff(truth, truth), 0.0);
}

TEST(MulticlassHausdorff, MissingClassCostsDiagonal) {
  LabelMask truth(6, 8);
  LabelMask pred(6, 8);
  truth(2, 2) = 1;
  pred(2, 2) = 1;
  truth(4, 4) = 3;
  EXPECT_DOUBLE_EQ(multiclass_hausdorff(pred, truth), std::hypot(6.0, 8.0) / 2.0);
}

TEST(MulticlassHausdorff, BackgroundOnlyThrows) {
  EXPECT_THROW(multiclass_hausdorff(LabelMask(3, 3), LabelMask(3, 3)), EmptySetError);
  EXPECT_THROW(multiclass_hausdorff(LabelMask(3, 3), LabelMask(3, 4)), ShapeError);
}

TEST(Confusion, DirectCount) {
  const LabelMask truth(2, 1, {1, 2});
  const LabelMask pred(2, 1, {2, 1});
  const auto c = confusion(pred, truth);
  EXPECT_EQ(c.counts[1][2], 1);
  EXPECT_EQ(c.counts[2][1], 1);
  EXPECT_EQ(c.total(), 2);
  const auto same = confusion(truth, truth);
  EXPECT_EQ(same.counts[1][1], 1);
  EXPECT_EQ(same.counts[2][2], 1);
  EXPECT_EQ(same.counts[1][2], 0);
  EXPECT_THROW(confusion(LabelMask(2, 2), LabelMask(2, 3)), ShapeError);
  EXPECT_THROW(confusion(LabelMask(1, 1, {4}), LabelMask(1, 1)), LabelError);
}

TEST(Overlap, BinaryCountsExample) {
  // Class 1: TP 3, FP 1, FN 2.
  ConfusionCounts c;
  c.counts[1][1] = 3;
  c.counts[0][1] = 1;
  c.counts[1][0] = 2;
  const auto m = overlap_metrics(c);
  ASSERT_TRUE(m.class_jaccard[1].has_value());
  EXPECT_DOUBLE_EQ(*m.class_jaccard[1], 0.5);
  const double j = *m.class_jaccard[1];
  EXPECT_NEAR(2.0 * j / (1.0 + j), 0.6667, 5e-5);
  EXPECT_FALSE(m.class_jaccard[2].has_value());
}

TEST(Overlap, IdenticalMasksArePerfect) {
  Rng rng(4);
  const auto mask = random_mask(rng, 16, 16, 3);
  const auto m = overlap_metrics(confusion(mask, mask));
  EXPECT_EQ(m.mean_jaccard, 1.0);
  EXPECT_EQ(m.f_measure, 1.0);
  EXPECT_EQ(m.kappa, 1.0);
  EXPECT_EQ(m.ari, 1.0);
  const auto flat = overlap_metrics(confusion(LabelMask(3, 3), LabelMask(3, 3)));
  EXPECT_EQ(flat.kappa, 1.0);
  EXPECT_EQ(flat.ari, 1.0);
}

TEST(Overlap, MatchesTableOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = random_table(rng, 500);
    const auto c = from_table(t);
    const auto m = overlap_metrics(c);
    const auto o = overlap_oracle(t);
    for (std::size_t k = 0; k < 4; ++k) {
      ASSERT_EQ(m.class_jaccard[k].has_value(), o.present[k]);
      if (o.present[k]) {
        ASSERT_NEAR(*m.class_jaccard[k], o.jaccard[k], 1e-12);
      }
    }
    ASSERT_NEAR(m.mean_jaccard, o.mean_jaccard, 1e-12);
    ASSERT_NEAR(m.f_measure, o.f_measure, 1e-12);
    ASSERT_NEAR(m.kappa, o.kappa, 1e-12);
    ASSERT_NEAR(m.ari, o.ari, 1e-12);
    ASSERT_NEAR(mutual_information(c), o.mutual_information, 1e-12);
    ASSERT_LE(m.kappa, 1.0);
    ASSERT_GE(mutual_information(c), 0.0);
  }
}

TEST(Overlap, DiceJaccardIdentityPerClass) {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = from_table(random_table(rng, 1000));
    const auto m = overlap_metrics(c);
    for (int k = 0; k < 4; ++k) {
      const auto tp = static_cast<double>(c.tp(k));
      const auto denom = static_cast<double>(2 * c.tp(k) + c.fp(k) + c.fn(k));
      if (!m.class_jaccard[static_cast<std::size_t>(k)] || denom == 0.0) {
        continue;
      }
      const double j = *m.class_jaccard[static_cast<std::size_t>(k)];
      ASSERT_NEAR(2.0 * tp / denom, 2.0 * j / (1.0 + j), 1e-12);
    }
  }
}

TEST(Overlap, IndependentLabelingsHaveChanceAgreement) {
  Rng rng(2024);
  LabelMask a(200, 200);
  LabelMask b(200, 200);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.values()[i] = static_cast<std::uint8_t>(rng.below(4));
    b.values()[i] = static_cast<std::uint8_t>(rng.below(4));
  }
  const auto m = overlap_metrics(confusion(a, b));
  EXPECT_LT(std::abs(m.kappa), 0.05);
  EXPECT_LT(std::abs(m.ari), 0.05);
}

TEST(Overlap, AriOneOnlyForIdenticalPartitions) {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_mask(rng, 12, 12, 3);
    auto b = a;
    b(static_cast<int>(rng.below(12)), static_cast<int>(rng.below(12))) ^= 1;
    ASSERT_LT(overlap_metrics(confusion(b, a)).ari, 1.0);
  }
}

TEST(MutualInformation, Examples) {
  LabelMask half(1, 4, {0, 0, 1, 1});
  EXPECT_NEAR(mutual_information(confusion(half, half)), std::log(2.0), 1e-15);
  ConfusionCounts product;
  product.counts[0][0] = 6;
  product.counts[0][1] = 3;
  product.counts[1][0] = 2;
  product.counts[1][1] = 1;
  EXPECT_NEAR(mutual_information(product), 0.0, 1e-15);
}

TEST(PixelErrors, TwoPixelExample) {
  const auto e = pixel_error_metrics(LabelMask(1, 2, {3, 3}), LabelMask(1, 2, {0, 3}));
  EXPECT_EQ(e.mae, 1.5);
  EXPECT_EQ(e.mse, 4.5);
  EXPECT_NEAR(e.psnr, 3.010299956639812, 1e-12);
  const auto same = pixel_error_metrics(LabelMask(1, 2, {3, 3}), LabelMask(1, 2, {3, 3}));
  EXPECT_EQ(same.mae, 0.0);
  EXPECT_EQ(same.mse, 0.0);
  EXPECT_EQ(same.psnr, std::numeric_limits<double>::infinity());
}

TEST(PixelErrors, MaeBoundedByRootMse) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto e = pixel_error_metrics(random_mask(rng, 10, 10, 3), random_mask(rng, 10, 10, 3));
    ASSERT_LE(e.mae, std::sqrt(e.mse) + 1e-15);
  }
}

TEST(ErrorSeries, HandExamples) {
  EXPECT_DOUBLE_EQ(mape({{100, 200}, {110, 180}, "m"}), 10.0);
  EXPECT_DOUBLE_EQ(rmspe({{110}, {100}, "m"}), 10.0);
  EXPECT_EQ(mape({{3, 4}, {3, 4}, "m"}), 0.0);
  EXPECT_EQ(rmspe({{3, 4}, {3, 4}, "m"}), 0.0);
  EXPECT_THROW(mape({{0}, {1}, "m"}), DivisionError);
  EXPECT_THROW(rmspe({{1}, {0}, "m"}), DivisionError);
  EXPECT_THROW(mape({{1, 2}, {1}, "m"}), ShapeError);
  EXPECT_THROW(mape({{}, {}, "m"}), EmptySetError);
}

TEST(ErrorSeries, MatchedFormsDivideByTruth) {
  const ErrorSeries s{{110}, {100}, "m"};
  EXPECT_DOUBLE_EQ(rmspe_matched(s), 100.0 * 10.0 / 110.0);
  EXPECT_DOUBLE_EQ(mape_matched(s), mape(s));
}

TEST(ErrorSeries, MatchedRmsNotBelowMean) {
  Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    ErrorSeries s;
    const auto n = 1 + rng.below(20);
    for (std::uint64_t i = 0; i < n; ++i) {
      s.truth.push_back(rng.uniform(0.5, 10.0));
      s.predicted.push_back(rng.uniform(0.5, 10.0));
    }
    ASSERT_GE(rmspe_matched(s), mape_matched(s) - 1e-12);
  }
}

TEST(Aggregate, SingleRowHasZeroSpread) {
  Rng rng(1);
  const auto a = random_mask(rng, 10, 10, 3);
  const auto b = random_mask(rng, 10, 10, 3);
  const std::vector<ImageMetrics> rows{evaluate_pair(b, a, "f0")};
  const auto agg = aggregate(rows);
  EXPECT_EQ(agg.mean.frame_id, "mean");
  EXPECT_EQ(agg.stddev.frame_id, "stddev");
  EXPECT_EQ(agg.mean.mean_jaccard, rows[0].mean_jaccard);
  EXPECT_EQ(agg.mean.hausdorff, rows[0].hausdorff);
  EXPECT_EQ(agg.stddev.kappa, 0.0);
}

TEST(Aggregate, PopulationStandardDeviation) {
  std::vector<ImageMetrics> rows(2);
  rows[0].mae = 1.0;
  rows[1].mae = 3.0;
  rows[0].psnr = rows[1].psnr = std::numeric_limits<double>::infinity();
  const auto agg = aggregate(rows);
  EXPECT_EQ(agg.mean.mae, 2.0);
  EXPECT_EQ(agg.stddev.mae, 1.0);
  EXPECT_EQ(agg.mean.psnr, std::numeric_limits<double>::infinity());
  EXPECT_EQ(agg.stddev.psnr, 0.0);
}

TEST(EvaluatePair, IdenticalMasks) {
  Rng rng(3);
  const auto a = random_mask(rng, 20, 20, 3);
  const auto m = evaluate_pair(a, a, "x");
  EXPECT_EQ(m.frame_id, "x");
  EXPECT_EQ(m.hausdorff, 0.0);
  EXPECT_EQ(m.mean_jaccard, 1.0);
  EXPECT_EQ(m.kappa, 1.0);
  EXPECT_EQ(m.mae, 0.0);
}

}  // namespace
}  // namespace jetseg
