#ifndef LLA_PREDICTORS_H_
#define LLA_PREDICTORS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lla/key.h"
#include "lla/list_labeling.h"

namespace lla {

// A contiguous run of the input in arrival order. `start_offset` is the
// position of keys[0] in the full input.
struct SequenceSlice {
  std::vector<Key> keys;
  std::size_t start_offset = 0;

  std::size_t size() const { return keys.size(); }
  bool empty() const { return keys.empty(); }
  // Sub-slice [begin, begin + length), offsets kept absolute.
  SequenceSlice sub(std::size_t begin, std::size_t length) const;
};

// Predicted ranks aligned with a test slice.
struct PredictionVector {
  std::vector<std::int64_t> ranks;
  std::optional<std::int64_t> eta_max;

  std::size_t size() const { return ranks.size(); }
};

enum class PredictorTag { kRankScaled = 1, kDriftAdjusted = 2 };

// 1-based rank of `key` among `sorted_train_raw`: (# strictly smaller) + 1.
std::int64_t empirical_rank(std::span<const std::int64_t> sorted_train_raw, Key key);
// Convenience overload that sorts a copy of the slice.
std::int64_t empirical_rank(const SequenceSlice& train, Key key);

// Empirical training rank scaled by |test|/|train|, rounded half up and
// clamped to [1, |test|]. Requires a nonempty train slice.
PredictionVector predictor1(const SequenceSlice& train, const SequenceSlice& test);

// Least-squares slope of (i, key_i.raw), i = 1..|train|. Requires |train| >= 2.
double best_fit_slope(const SequenceSlice& train);

// Shifts the i-th training key (1-based) by slope * (d + i*(|test|/|train| - 1)),
// d = test.start_offset - train.start_offset, rounds back onto the
// fixed-point grid, and feeds the result to predictor1.
PredictionVector predictor2(const SequenceSlice& train, const SequenceSlice& test);

PredictionVector predict(PredictorTag tag, const SequenceSlice& train, const SequenceSlice& test);

// Splits `train` into halves, predicts the second half from the first with
// both predictors, replays the second half through a learned LLA (capacity
// |second half|, sentinel first) with each, and returns the predictor with
// fewer movements. Ties go to predictor1. Requires |train| >= 4.
PredictorTag select_predictor(const SequenceSlice& train, const LlaFactory& factory);

// Sets floor(percent * n / 100) uniformly sampled predictions to 1 or n,
// whichever is farther from the current value (ties go to n). Deterministic
// in `seed`.
PredictionVector corrupt(const PredictionVector& predictions, double percent, std::size_t n,
                         std::uint64_t seed);

// True 1-based final ranks of the slice: position in a stable sort by key,
// so duplicates rank in arrival order.
std::vector<std::int64_t> true_ranks(const SequenceSlice& slice);

// max |predicted - true| over the slice.
std::int64_t max_error(std::span<const std::int64_t> predicted,
                       std::span<const std::int64_t> truth);

}  // namespace lla

#endif  // LLA_PREDICTORS_H_
