#include "lla/harness/synthetic.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "lla/errors.h"

namespace lla::harness {
namespace {

constexpr SyntheticKind kKinds[] = {SyntheticKind::kSequential, SyntheticKind::kHammer,
                                    SyntheticKind::kRandom, SyntheticKind::kNoisyEta,
                                    SyntheticKind::kStochastic};

std::vector<std::int64_t> permutation(std::size_t n, std::int64_t first, std::mt19937_64& rng) {
  std::vector<std::int64_t> values(n);
  std::iota(values.begin(), values.end(), first);
  std::shuffle(values.begin(), values.end(), rng);
  return values;
}

}  // namespace

std::string_view synthetic_kind_name(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kSequential:
      return "sequential";
    case SyntheticKind::kHammer:
      return "hammer";
    case SyntheticKind::kRandom:
      return "random";
    case SyntheticKind::kNoisyEta:
      return "noisy-eta";
    case SyntheticKind::kStochastic:
      return "stochastic";
  }
  return "?";
}

std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name) {
  for (SyntheticKind k : kKinds) {
    if (synthetic_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

SyntheticStream make_synthetic(SyntheticKind kind, const SyntheticParams& params) {
  const std::size_t n = params.n;
  if (n < 2 || !std::has_single_bit(n)) {
    throw ConfigError("synthetic stream size must be a power of two >= 2, got " +
                      std::to_string(n));
  }
  if (params.eta < 0) throw ConfigError("eta must be non-negative");
  if (params.s < 0) throw ConfigError("s must be non-negative");

  std::mt19937_64 rng(params.seed);
  std::vector<std::int64_t> raw;
  switch (kind) {
    case SyntheticKind::kSequential:
    case SyntheticKind::kStochastic:
      raw.resize(n);
      std::iota(raw.begin(), raw.end(), std::int64_t{1});
      break;
    case SyntheticKind::kRandom:
    case SyntheticKind::kNoisyEta:
      raw = permutation(n, 1, rng);
      break;
    case SyntheticKind::kHammer: {
      const std::size_t half = n / 2;
      const auto spacing = static_cast<std::int64_t>(n);
      raw = permutation(half, 1, rng);
      for (auto& v : raw) v *= spacing;
      const std::int64_t pivot = static_cast<std::int64_t>(half / 2) * spacing;
      for (std::size_t i = 1; i <= n - half; ++i) raw.push_back(pivot + static_cast<std::int64_t>(i));
      break;
    }
  }

  SyntheticStream out;
  out.keys.keys.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.keys.keys[i] = Key{raw[i], i};
  out.truth = true_ranks(out.keys);

  const auto top = static_cast<std::int64_t>(n);
  out.predictions.ranks = out.truth;
  char label[96];
  if (kind == SyntheticKind::kStochastic) {
    std::normal_distribution<double> noise(params.mu, params.s > 0 ? params.s : 1.0);
    for (auto& p : out.predictions.ranks) {
      const double e = params.s > 0 ? noise(rng) : params.mu;
      p = std::clamp<std::int64_t>(p + std::llround(e), 1, top);
    }
    std::snprintf(label, sizeof label, "synth-stochastic:mu=%g,s=%g", params.mu, params.s);
  } else {
    if (params.eta > 0) {
      std::uniform_int_distribution<std::int64_t> noise(-params.eta, params.eta);
      for (auto& p : out.predictions.ranks) p = std::clamp<std::int64_t>(p + noise(rng), 1, top);
    }
    std::snprintf(label, sizeof label, "synth-%s:eta=%lld",
                  std::string(synthetic_kind_name(kind)).c_str(),
                  static_cast<long long>(params.eta));
  }
  out.label = label;
  out.predictions.eta_max = max_error(out.predictions.ranks, out.truth);
  return out;
}

std::vector<ExperimentResult> run_synthetic(SyntheticKind kind, const SyntheticParams& params,
                                            ExperimentConfig config) {
  const SyntheticStream stream = make_synthetic(kind, params);
  config.check_witness = true;
  std::vector<ExperimentResult> rows;
  for (Structure s : config.structures) {
    ExperimentResult r = run_structure(s, stream.keys, stream.predictions.ranks, stream.truth, config);
    r.dataset = stream.label;
    r.seed = params.seed;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace lla::harness
