#include "lla/predictors.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "lla/pma.h"

namespace lla {
namespace {

SequenceSlice slice(const std::vector<std::int64_t>& raws, std::size_t start = 0) {
  SequenceSlice s;
  s.start_offset = start;
  for (std::size_t i = 0; i < raws.size(); ++i) s.keys.push_back(Key{raws[i], start + i});
  return s;
}

std::vector<std::int64_t> random_raws(std::size_t n, std::int64_t spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> out(n);
  for (auto& r : out) r = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(spread));
  return out;
}

TEST(EmpiricalRankTest, StrictlyLessPlusOne) {
  const auto train = slice({40, 10, 30, 20});
  EXPECT_EQ(empirical_rank(train, Key{25, 0}), 3);
  EXPECT_EQ(empirical_rank(train, Key{1, 0}), 1);
  EXPECT_EQ(empirical_rank(train, Key{20, 0}), 2);
  EXPECT_EQ(empirical_rank(train, Key{99, 0}), 5);
}

TEST(Predictor1Test, ScalesAndRounds) {
  const auto train = slice({10, 20, 30, 40});
  const auto test = slice({25, 1, 2, 3, 4, 5, 6, 99});
  const auto p = predictor1(train, test);
  ASSERT_EQ(p.size(), 8u);
  EXPECT_EQ(p.ranks[0], 6);
  EXPECT_EQ(p.ranks[1], 2);  // rank 1 scaled by 2
  EXPECT_EQ(p.ranks[7], 8);  // rank 5 scaled to 10, clamped
}

TEST(Predictor1Test, HalfRoundsUp) {
  // Scale 3/2: rank 1 -> 1.5 -> 2; rank 3 -> 4.5 -> 5, clamped to 3.
  const auto train = slice({10, 20});
  const auto test = slice({5, 15, 25});
  EXPECT_EQ(predictor1(train, test).ranks, (std::vector<std::int64_t>{2, 3, 3}));
}

TEST(Predictor1Test, SameSliceGivesEmpiricalRanks) {
  const auto train = slice({7, 3, 9, 3, 1});
  const auto p = predictor1(train, train);
  for (std::size_t i = 0; i < train.size(); ++i) {
    EXPECT_EQ(p.ranks[i], empirical_rank(train, train.keys[i]));
  }
}

TEST(Predictor1Test, MonotoneAndInRange) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto train = slice(random_raws(1 + seed * 7, 500, seed));
    const auto test = slice(random_raws(3 + seed * 11, 600, seed + 100), 1000);
    const auto p = predictor1(train, test);
    std::vector<std::size_t> order(test.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return test.keys[a] < test.keys[b]; });
    for (std::size_t i = 0; i < order.size(); ++i) {
      ASSERT_GE(p.ranks[order[i]], 1);
      ASSERT_LE(p.ranks[order[i]], static_cast<std::int64_t>(test.size()));
      if (i > 0) {
        ASSERT_LE(p.ranks[order[i - 1]], p.ranks[order[i]]);
      }
    }
  }
}

TEST(BestFitSlopeTest, Examples) {
  EXPECT_DOUBLE_EQ(best_fit_slope(slice({5, 7, 9, 11})), 2.0);
  EXPECT_DOUBLE_EQ(best_fit_slope(slice({4, 4, 4})), 0.0);
  EXPECT_DOUBLE_EQ(best_fit_slope(slice({1, 2, 4})), 1.5);
  EXPECT_THROW(best_fit_slope(slice({1})), std::invalid_argument);
}

TEST(Predictor2Test, ZeroSlopeMatchesPredictor1) {
  const auto train = slice({10, 30, 30, 10}, 0);
  ASSERT_DOUBLE_EQ(best_fit_slope(train), 0.0);
  const auto test = slice(random_raws(50, 40, 3), 4);
  EXPECT_EQ(predictor2(train, test).ranks, predictor1(train, test).ranks);

  const auto flat = slice({8, 8, 8, 8, 8}, 0);
  const auto test2 = slice(random_raws(9, 16, 4), 20);
  EXPECT_EQ(predictor2(flat, test2).ranks, predictor1(flat, test2).ranks);
}

TEST(Predictor2Test, EqualSizesShiftByDrift) {
  // key_i = i, slope 1, |test| = |train| = d = 16: every key moves up by 16.
  const std::size_t n = 16;
  std::vector<std::int64_t> train_raw(n), shifted(n);
  std::iota(train_raw.begin(), train_raw.end(), 1);
  for (std::size_t i = 0; i < n; ++i) shifted[i] = train_raw[i] + static_cast<std::int64_t>(n);
  const auto train = slice(train_raw, 0);
  const auto test = slice(random_raws(n, 40, 5), n);
  EXPECT_EQ(predictor2(train, test).ranks, predictor1(slice(shifted), test).ranks);
}

TEST(Predictor2Test, CompensatesLinearDrift) {
  const std::size_t n = 256;
  std::vector<std::int64_t> all(2 * n);
  std::iota(all.begin(), all.end(), 0);
  const auto train = slice({all.begin(), all.begin() + n}, 0);
  std::vector<std::int64_t> test_raw(all.begin() + n, all.end());
  std::shuffle(test_raw.begin(), test_raw.end(), std::mt19937_64(1));
  const auto test = slice(test_raw, n);
  const auto truth = true_ranks(test);
  EXPECT_LT(max_error(predictor2(train, test).ranks, truth),
            max_error(predictor1(train, test).ranks, truth));
}

TEST(PredictTest, DispatchesOnTag) {
  const auto train = slice({1, 5, 2, 8, 3});
  const auto test = slice({4, 6, 9}, 5);
  EXPECT_EQ(predict(PredictorTag::kRankScaled, train, test).ranks, predictor1(train, test).ranks);
  EXPECT_EQ(predict(PredictorTag::kDriftAdjusted, train, test).ranks,
            predictor2(train, test).ranks);
}

TEST(SelectPredictorTest, StationaryPrefersRankScaled) {
  const auto train = slice(random_raws(4096, 1'000'000, 9));
  EXPECT_EQ(select_predictor(train, pma_factory()), PredictorTag::kRankScaled);
}

TEST(SelectPredictorTest, DriftPrefersDriftAdjusted) {
  std::mt19937_64 rng(10);
  std::vector<std::int64_t> raws(4096);
  for (std::size_t t = 0; t < raws.size(); ++t) {
    raws[t] = static_cast<std::int64_t>(t * 100 + rng() % 500);
  }
  EXPECT_EQ(select_predictor(slice(raws), pma_factory()), PredictorTag::kDriftAdjusted);
}

TEST(SelectPredictorTest, TieGoesToRankScaled) {
  // Zero slope makes both predictions identical.
  EXPECT_EQ(select_predictor(slice({10, 30, 30, 10, 10, 30, 30, 10}), pma_factory()),
            PredictorTag::kRankScaled);
  EXPECT_THROW(select_predictor(slice({1, 2, 3}), pma_factory()), std::invalid_argument);
}

TEST(CorruptTest, Examples) {
  PredictionVector p;
  p.ranks = {1, 2, 3, 4, 5, 6, 7, 8};
  EXPECT_EQ(corrupt(p, 0, 8, 1).ranks, p.ranks);

  PredictionVector low;
  low.ranks = {1, 2, 3, 4, 1, 2, 3, 4};
  EXPECT_EQ(corrupt(low, 100, 8, 1).ranks, std::vector<std::int64_t>(8, 8));

  PredictionVector high;
  high.ranks = {8, 7, 6, 5};
  EXPECT_EQ(corrupt(high, 100, 8, 1).ranks.front(), 1);

  // 5 is 4 away from both 1 and 9.
  PredictionVector mid;
  mid.ranks = {5};
  EXPECT_EQ(corrupt(mid, 100, 9, 1).ranks, (std::vector<std::int64_t>{9}));
  EXPECT_THROW(corrupt(p, 101, 8, 1), std::invalid_argument);
}

TEST(CorruptTest, ChangesExactlyFloorTnOver100) {
  std::mt19937_64 rng(12);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 10 + rng() % 300;
    PredictionVector p;
    for (std::size_t i = 0; i < n; ++i) p.ranks.push_back(2 + static_cast<std::int64_t>(rng() % (n - 2)));
    const double t = static_cast<double>(rng() % 101);
    const auto q = corrupt(p, t, n, seed);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_GE(q.ranks[i], 1);
      ASSERT_LE(q.ranks[i], static_cast<std::int64_t>(n));
      if (q.ranks[i] != p.ranks[i]) {
        ++changed;
        ASSERT_TRUE(q.ranks[i] == 1 || q.ranks[i] == static_cast<std::int64_t>(n));
      }
    }
    ASSERT_EQ(changed, static_cast<std::size_t>(t * static_cast<double>(n) / 100.0));
    ASSERT_EQ(q.ranks, corrupt(p, t, n, seed).ranks);
  }
}

TEST(TrueRanksTest, StableOnDuplicates) {
  EXPECT_EQ(true_ranks(slice({30, 10, 20, 10})), (std::vector<std::int64_t>{4, 1, 3, 2}));
  EXPECT_EQ(max_error(std::vector<std::int64_t>{1, 5}, std::vector<std::int64_t>{3, 4}), 2);
}

TEST(SequenceSliceTest, SubKeepsAbsoluteOffset) {
  const auto s = slice({1, 2, 3, 4, 5}, 100);
  const auto sub = s.sub(2, 2);
  EXPECT_EQ(sub.start_offset, 102u);
  EXPECT_EQ(sub.keys[0].raw, 3);
  EXPECT_EQ(sub.size(), 2u);
}

}  // namespace
}  // namespace lla
