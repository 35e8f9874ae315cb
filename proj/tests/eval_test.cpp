#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "scdtns/eval.hpp"

using namespace scdtns;

TEST(Score, AllCorrect) {
  std::vector<LabelPair> p;
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 5; ++i) p.push_back({c, c});
  const auto m = score(p, 3);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.macro_f1, 1.0);
}

TEST(Score, EverythingPredictedAsClassZero) {
  // Class 0: precision 10/30, recall 1, F1 = 2 * (1/3) / (4/3) = 1/2.
  std::vector<LabelPair> p;
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 10; ++i) p.push_back({c, 0});
  const auto m = score(p, 3);
  EXPECT_NEAR(m.accuracy, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.macro_f1, 0.5 / 3.0, 1e-15);
  EXPECT_EQ(m.confusion[1][0], 10u);
  EXPECT_EQ(m.confusion[0][0], 10u);
}

TEST(Score, SingleWrongPrediction) {
  const std::vector<LabelPair> p{{1, 0}};
  const auto m = score(p, 2);
  EXPECT_EQ(m.accuracy, 0.0);
  EXPECT_EQ(m.macro_f1, 0.0);
}

TEST(Score, Errors) {
  EXPECT_THROW(score(std::vector<LabelPair>{}), Error);
  EXPECT_THROW(score(std::vector<LabelPair>{{0, 3}}, 3), Error);
  EXPECT_THROW(score(std::vector<LabelPair>{{-1, 0}}, 3), Error);
}

TEST(Score, IdentitiesOnRandomPredictions) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> classes(1, 6), size(1, 200);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = classes(rng);
    std::uniform_int_distribution<int> label(0, k - 1);
    std::vector<LabelPair> p(static_cast<std::size_t>(size(rng)));
    for (auto& x : p) x = {label(rng), label(rng)};
    const auto m = score(p, static_cast<std::size_t>(k));
    std::size_t trace = 0, total = 0;
    for (int c = 0; c < k; ++c) {
      std::size_t row = 0;
      for (int d = 0; d < k; ++d) {
        total += m.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)];
        row += m.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(d)];
      }
      trace += m.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
      std::size_t expected_row = 0;
      for (const auto& x : p) expected_row += x.truth == c;
      ASSERT_EQ(row, expected_row);
    }
    ASSERT_EQ(total, p.size());
    ASSERT_DOUBLE_EQ(m.accuracy, static_cast<double>(trace) / static_cast<double>(total));
    ASSERT_GE(m.macro_f1, 0.0);
    ASSERT_LE(m.macro_f1, 1.0);
  }
}

TEST(Sweep, ZeroMagnitudeSingleSampleIsPerfect) {
  DatasetSpec spec;
  spec.in_regime.magnitude = 0.0;
  spec.n_test = 5;
  const std::vector<std::size_t> sizes{1};
  const auto rows = sweep(spec, sizes, false);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].metrics.accuracy, 1.0);
}

TEST(Sweep, DeterministicTables) {
  DatasetSpec spec;
  spec.n_train = 8;
  spec.n_test = 20;
  const std::vector<std::size_t> sizes{1, 2, 8};
  const auto a = sweep(spec, sizes, true), b = sweep(spec, sizes, true);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].train_size, sizes[i]);
    EXPECT_EQ(a[i].metrics.accuracy, b[i].metrics.accuracy);
    EXPECT_EQ(a[i].metrics.macro_f1, b[i].metrics.macro_f1);
  }
}

TEST(Sweep, NestedPrefixes) {
  DatasetSpec spec;
  spec.n_train = 5;
  spec.n_test = 1;
  const auto data = generate(spec);
  for (std::size_t k = 1; k < spec.n_train; ++k) {
    const auto small = class_prefix(data.train, k), big = class_prefix(data.train, k + 1);
    ASSERT_EQ(small.size(), 3 * k);
    for (const auto& s : small) {
      const bool found = std::any_of(big.begin(), big.end(), [&](const auto& b) {
        return b.label == s.label && b.signal == s.signal;
      });
      EXPECT_TRUE(found);
    }
  }
}

TEST(Sweep, OutOfDistributionNeverBeatsInDistributionByMuch) {
  DatasetSpec spec;
  spec.n_train = 64;
  const std::vector<std::size_t> sizes{1, 2, 4, 8, 16, 32, 64};
  const auto in = sweep(spec, sizes, false), out = sweep(spec, sizes, true);
  for (std::size_t i = 0; i < sizes.size(); ++i)
    EXPECT_LE(out[i].metrics.accuracy, in[i].metrics.accuracy + 0.02) << "size " << sizes[i];
  EXPECT_LT(in.back().metrics.accuracy - out.back().metrics.accuracy, 0.10);
}

TEST(Sweep, RejectsBadSizes) {
  DatasetSpec spec;
  spec.n_train = 4;
  EXPECT_THROW(sweep(spec, std::vector<std::size_t>{2, 1}, false), Error);
  EXPECT_THROW(sweep(spec, std::vector<std::size_t>{8}, false), Error);
  EXPECT_THROW(sweep(spec, std::vector<std::size_t>{}, false), Error);
}
