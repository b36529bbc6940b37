#ifndef LLA_HARNESS_SYNTHETIC_H_
#define LLA_HARNESS_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lla/harness/experiment.h"
#include "lla/predictors.h"

namespace lla::harness {

// sequential: keys 1..n in increasing order.
// hammer:     n/2 spread-out background keys in random order, then n/2 keys
//             each inserted as the new predecessor of one fixed key.
// random:     a random permutation of 1..n.
// noisy-eta:  random order; predictions = true rank + uniform noise in [-eta, eta].
// stochastic: sorted-increasing arrival; predictions = true rank +
//             round(Normal(mu, s^2)).
// sequential, hammer and random also take the uniform eta noise (default 0,
// i.e. perfect predictions). Predictions are clamped to [1, n].
enum class SyntheticKind { kSequential, kHammer, kRandom, kNoisyEta, kStochastic };

std::string_view synthetic_kind_name(SyntheticKind kind);
std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name);

struct SyntheticParams {
  std::size_t n = 1024;
  std::int64_t eta = 0;
  double mu = 0.0;
  double s = 0.0;
  std::uint64_t seed = 1;
};

struct SyntheticStream {
  SequenceSlice keys;
  std::vector<std::int64_t> truth;
  PredictionVector predictions;
  std::string label;
};

// Throws ConfigError unless n is a power of two (>= 2).
SyntheticStream make_synthetic(SyntheticKind kind, const SyntheticParams& params);

// All configured structures on one stream, with witness checks after every
// learned merge.
std::vector<ExperimentResult> run_synthetic(SyntheticKind kind, const SyntheticParams& params,
                                            ExperimentConfig config);

}  // namespace lla::harness

#endif  // LLA_HARNESS_SYNTHETIC_H_
