#include "lla/predictors.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "lla/learned_lla.h"

namespace lla {
namespace {

std::vector<std::int64_t> sorted_raw(std::span<const Key> keys) {
  std::vector<std::int64_t> raw(keys.size());
  std::transform(keys.begin(), keys.end(), raw.begin(), [](const Key& k) { return k.raw; });
  std::sort(raw.begin(), raw.end());
  return raw;
}

// round_half_up(rank * num / den) clamped to [1, num].
std::int64_t scale_rank(std::int64_t rank, std::size_t num, std::size_t den) {
  const __int128 twice = static_cast<__int128>(2) * rank * static_cast<__int128>(num);
  const auto scaled = static_cast<std::int64_t>((twice + den) / (2 * static_cast<__int128>(den)));
  return std::clamp<std::int64_t>(scaled, 1, static_cast<std::int64_t>(std::max<std::size_t>(1, num)));
}

std::int64_t to_raw(long double value) {
  constexpr long double kLo = static_cast<long double>(std::numeric_limits<std::int64_t>::min() + 1);
  constexpr long double kHi = static_cast<long double>(std::numeric_limits<std::int64_t>::max());
  const long double r = std::round(value);
  if (r <= kLo) return std::numeric_limits<std::int64_t>::min() + 1;
  if (r >= kHi) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(r);
}

}  // namespace

SequenceSlice SequenceSlice::sub(std::size_t begin, std::size_t length) const {
  if (begin + length > keys.size()) throw std::out_of_range("slice out of range");
  SequenceSlice out;
  out.keys.assign(keys.begin() + static_cast<std::ptrdiff_t>(begin),
                  keys.begin() + static_cast<std::ptrdiff_t>(begin + length));
  out.start_offset = start_offset + begin;
  return out;
}

std::int64_t empirical_rank(std::span<const std::int64_t> sorted_train_raw, Key key) {
  const auto below = std::lower_bound(sorted_train_raw.begin(), sorted_train_raw.end(), key.raw);
  return static_cast<std::int64_t>(below - sorted_train_raw.begin()) + 1;
}

std::int64_t empirical_rank(const SequenceSlice& train, Key key) {
  const auto raw = sorted_raw(train.keys);
  return empirical_rank(raw, key);
}

PredictionVector predictor1(const SequenceSlice& train, const SequenceSlice& test) {
  if (train.empty()) throw std::invalid_argument("predictor1 needs a nonempty training slice");
  const auto raw = sorted_raw(train.keys);
  PredictionVector out;
  out.ranks.reserve(test.size());
  for (const Key& key : test.keys) {
    out.ranks.push_back(scale_rank(empirical_rank(raw, key), test.size(), train.size()));
  }
  return out;
}

double best_fit_slope(const SequenceSlice& train) {
  const std::size_t n = train.size();
  if (n < 2) throw std::invalid_argument("best-fit slope needs at least two points");
  long double mean_y = 0;
  for (const Key& k : train.keys) mean_y += static_cast<long double>(k.raw);
  mean_y /= static_cast<long double>(n);
  const long double mean_x = (static_cast<long double>(n) + 1) / 2;
  long double sxy = 0;
  long double sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double dx = static_cast<long double>(i + 1) - mean_x;
    sxy += dx * (static_cast<long double>(train.keys[i].raw) - mean_y);
    sxx += dx * dx;
  }
  return static_cast<double>(sxy / sxx);
}

PredictionVector predictor2(const SequenceSlice& train, const SequenceSlice& test) {
  const long double slope = best_fit_slope(train);
  const long double d = static_cast<long double>(test.start_offset) -
                        static_cast<long double>(train.start_offset);
  const long double stretch =
      static_cast<long double>(test.size()) / static_cast<long double>(train.size()) - 1;
  SequenceSlice shifted = train;
  for (std::size_t i = 0; i < shifted.size(); ++i) {
    Key& k = shifted.keys[i];
    const long double step = static_cast<long double>(i + 1);
    k.raw = to_raw(static_cast<long double>(k.raw) + slope * (d + step * stretch));
  }
  return predictor1(shifted, test);
}

PredictionVector predict(PredictorTag tag, const SequenceSlice& train, const SequenceSlice& test) {
  return tag == PredictorTag::kRankScaled ? predictor1(train, test) : predictor2(train, test);
}

PredictorTag select_predictor(const SequenceSlice& train, const LlaFactory& factory) {
  if (train.size() < 4) throw std::invalid_argument("predictor selection needs >= 4 points");
  const std::size_t half = train.size() / 2;
  const SequenceSlice first = train.sub(0, half);
  const SequenceSlice second = train.sub(half, train.size() - half);

  const PredictionVector p1 = predictor1(first, second);
  const PredictionVector p2 = predictor2(first, second);
  const LearnedLla::Options options{};
  const auto cost1 = replay(second.keys, p1.ranks, factory, options, true).movements;
  const auto cost2 = replay(second.keys, p2.ranks, factory, options, true).movements;
  return cost2 < cost1 ? PredictorTag::kDriftAdjusted : PredictorTag::kRankScaled;
}

PredictionVector corrupt(const PredictionVector& predictions, double percent, std::size_t n,
                         std::uint64_t seed) {
  if (!(percent >= 0.0 && percent <= 100.0)) {
    throw std::invalid_argument("corruption percentage must be in [0, 100]");
  }
  PredictionVector out = predictions;
  out.eta_max.reset();
  const std::size_t total = predictions.size();
  const auto wanted = static_cast<std::size_t>(std::floor(percent * static_cast<double>(n) / 100.0));
  const std::size_t k = std::min(wanted, total);

  std::vector<std::size_t> index(total);
  std::iota(index.begin(), index.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  const auto top = static_cast<std::int64_t>(n);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, total - 1);
    std::swap(index[i], index[pick(rng)]);
    std::int64_t& p = out.ranks[index[i]];
    p = (p - 1) > (top - p) ? 1 : top;
  }
  return out;
}

std::vector<std::int64_t> true_ranks(const SequenceSlice& slice) {
  std::vector<std::size_t> order(slice.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return slice.keys[a] < slice.keys[b]; });
  std::vector<std::int64_t> ranks(slice.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    ranks[order[r]] = static_cast<std::int64_t>(r) + 1;
  }
  return ranks;
}

std::int64_t max_error(std::span<const std::int64_t> predicted,
                       std::span<const std::int64_t> truth) {
  if (predicted.size() != truth.size()) throw std::invalid_argument("length mismatch");
  std::int64_t worst = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    worst = std::max(worst, std::abs(predicted[i] - truth[i]));
  }
  return worst;
}

}  // namespace lla
