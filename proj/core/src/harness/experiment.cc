#include "lla/harness/experiment.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>

#include "lla/apma.h"
#include "lla/errors.h"

namespace lla::harness {
namespace {

constexpr std::uint64_t kSentinelSeq = kMinKey.seq;

std::string format_percent(double t) {
  char buf[32];
  if (t == std::floor(t)) {
    std::snprintf(buf, sizeof buf, "%.0f", t);
  } else {
    std::snprintf(buf, sizeof buf, "%g", t);
  }
  return buf;
}

// Predictions are selected per black-box type and reused across rows.
class PredictionCache {
 public:
  PredictionCache(const SequenceSlice& train, const SequenceSlice& test,
                  const PmaThresholds& thresholds)
      : train_(train), test_(test), thresholds_(thresholds) {}

  const PredictionVector& for_structure(Structure s) {
    const bool adaptive = s == Structure::kApma || s == Structure::kLearnedApma;
    auto it = cache_.find(adaptive);
    if (it == cache_.end()) {
      const LlaFactory factory = adaptive ? apma_factory(thresholds_) : pma_factory(thresholds_);
      it = cache_.emplace(adaptive, build_predictions(train_, test_, factory)).first;
    }
    return it->second;
  }

 private:
  const SequenceSlice& train_;
  const SequenceSlice& test_;
  PmaThresholds thresholds_;
  std::map<bool, PredictionVector> cache_;
};

}  // namespace

std::string_view structure_name(Structure s) {
  switch (s) {
    case Structure::kPma:
      return "pma";
    case Structure::kApma:
      return "apma";
    case Structure::kLearnedPma:
      return "learned-pma";
    case Structure::kLearnedApma:
      return "learned-apma";
  }
  return "?";
}

std::optional<Structure> parse_structure(std::string_view name) {
  for (Structure s : all_structures()) {
    if (structure_name(s) == name) return s;
  }
  return std::nullopt;
}

std::vector<Structure> all_structures() {
  return {Structure::kPma, Structure::kApma, Structure::kLearnedPma, Structure::kLearnedApma};
}

bool is_learned(Structure s) {
  return s == Structure::kLearnedPma || s == Structure::kLearnedApma;
}

LlaFactory factory_for(Structure s, const PmaThresholds& thresholds) {
  return s == Structure::kApma || s == Structure::kLearnedApma ? apma_factory(thresholds)
                                                               : pma_factory(thresholds);
}

bool witness_error_check(const MergeEvent& event, std::span<const std::int64_t> predicted,
                         std::span<const std::int64_t> truth) {
  const auto ranks = static_cast<std::int64_t>(event.node.rank_count());
  return std::any_of(event.keys.begin(), event.keys.end(), [&](const Key& key) {
    if (key.seq == kSentinelSeq) return false;
    const std::int64_t eta = std::abs(predicted[key.seq] - truth[key.seq]);
    return 2 * eta >= ranks;
  });
}

ExperimentResult run_structure(Structure s, const SequenceSlice& test,
                               std::span<const std::int64_t> predictions,
                               std::span<const std::int64_t> truth,
                               const ExperimentConfig& config) {
  const std::size_t n = test.size();
  if (truth.size() != n) throw std::invalid_argument("truth must align with the test slice");
  std::vector<Key> keys = test.keys;
  for (std::size_t i = 0; i < n; ++i) keys[i].seq = i;

  const bool learned = is_learned(s);
  std::vector<std::int64_t> used(n, 1);
  if (learned) {
    if (predictions.size() != n) {
      throw std::invalid_argument("predictions must align with the test slice");
    }
    const auto top = static_cast<std::int64_t>(std::max<std::size_t>(1, n));
    for (std::size_t i = 0; i < n; ++i) used[i] = std::clamp<std::int64_t>(predictions[i], 1, top);
  }

  ExperimentResult result;
  result.structure = std::string(structure_name(s));
  result.test = n;
  result.eta_max = n == 0 ? 0 : max_error(used, truth);

  const LlaFactory factory = factory_for(s, config.thresholds);
  const auto start = std::chrono::steady_clock::now();
  if (!learned && config.standalone_baselines) {
    const auto box = factory(kSlotsPerRank * std::bit_ceil(std::max<std::size_t>(1, n)));
    box->insert(kMinKey);
    std::uint64_t moved = 0;
    for (const Key& key : keys) moved += box->insert(key);
    result.amortized_cost = n == 0 ? 0.0 : static_cast<double>(moved) / static_cast<double>(n);
  } else {
    LearnedLla::Options options;
    options.routing = learned ? LearnedLla::Routing::kPredicted : LearnedLla::Routing::kFirstActual;
    std::function<void(const MergeEvent&)> observer;
    if (learned && config.check_witness) {
      observer = [&](const MergeEvent& event) {
        ++result.witness_checks;
        if (!witness_error_check(event, used, truth)) ++result.witness_failures;
      };
    }
    const ReplayStats stats = replay(keys, used, factory, options, true, observer);
    result.amortized_cost = stats.amortized_cost();
    result.merges = stats.merges;
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

PredictionVector build_predictions(const SequenceSlice& train, const SequenceSlice& test,
                                   const LlaFactory& selection_factory) {
  if (train.empty()) {
    PredictionVector ones;
    ones.ranks.assign(test.size(), 1);
    return ones;
  }
  if (train.size() < 4) return predictor1(train, test);
  return predict(select_predictor(train, selection_factory), train, test);
}

std::vector<ExperimentResult> run_table(const SequenceSlice& data, const std::string& dataset,
                                        std::size_t k, const ExperimentConfig& config) {
  const std::size_t n = std::size_t{1} << k;
  if (data.size() < 2 * n) {
    throw ConfigError("dataset " + dataset + " has " + std::to_string(data.size()) +
                      " rows; k=" + std::to_string(k) + " needs " + std::to_string(2 * n));
  }
  const SequenceSlice train = data.sub(0, n);
  const SequenceSlice test = data.sub(n, n);
  const std::vector<std::int64_t> truth = true_ranks(test);
  PredictionCache predictions(train, test, config.thresholds);

  std::vector<ExperimentResult> rows;
  for (Structure s : config.structures) {
    const std::span<const std::int64_t> p =
        is_learned(s) ? std::span<const std::int64_t>(predictions.for_structure(s).ranks)
                      : std::span<const std::int64_t>();
    ExperimentResult r = run_structure(s, test, p, truth, config);
    r.dataset = dataset;
    r.train = n;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ExperimentResult> run_table(const DatasetSpec& spec, std::size_t k,
                                        const ExperimentConfig& config) {
  DatasetSpec limited = spec;
  const std::size_t needed = std::size_t{2} << k;
  if (!limited.max_rows || *limited.max_rows > needed) limited.max_rows = needed;
  return run_table(load_dataset(limited), spec.name(), k, config);
}

std::vector<ExperimentResult> run_scaling(const SequenceSlice& data, const std::string& dataset,
                                          std::size_t k_min, std::size_t k_max,
                                          const ExperimentConfig& config) {
  std::vector<ExperimentResult> rows;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    auto sweep = run_table(data, dataset, k, config);
    rows.insert(rows.end(), sweep.begin(), sweep.end());
  }
  return rows;
}

std::vector<ExperimentResult> run_learning_curve(const SequenceSlice& data,
                                                 const std::string& dataset, std::size_t test_k,
                                                 std::span<const double> percentages,
                                                 const ExperimentConfig& config) {
  const std::size_t n = std::size_t{1} << test_k;
  if (data.size() < 2 * n) {
    throw ConfigError("dataset " + dataset + " is too short for test_k=" + std::to_string(test_k));
  }
  const SequenceSlice test = data.sub(n, n);
  const std::vector<std::int64_t> truth = true_ranks(test);

  std::vector<ExperimentResult> rows;
  for (double f : percentages) {
    if (!(f >= 0.0 && f <= 100.0)) {
      throw ConfigError("training fraction " + format_percent(f) +
                        "% exceeds the prefix before the test slice");
    }
    const auto train_size = static_cast<std::size_t>(std::floor(f * static_cast<double>(n) / 100.0));
    const SequenceSlice train = data.sub(n - train_size, train_size);
    PredictionCache predictions(train, test, config.thresholds);
    for (Structure s : config.structures) {
      const std::span<const std::int64_t> p =
          is_learned(s) ? std::span<const std::int64_t>(predictions.for_structure(s).ranks)
                        : std::span<const std::int64_t>();
      ExperimentResult r = run_structure(s, test, p, truth, config);
      r.dataset = dataset;
      r.train = train_size;
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

std::vector<ExperimentResult> run_robustness(const SequenceSlice& data,
                                             const std::string& dataset, std::size_t k,
                                             std::span<const double> t_values,
                                             std::size_t repeats, std::uint64_t base_seed,
                                             const ExperimentConfig& config) {
  const std::size_t n = std::size_t{1} << k;
  if (data.size() < 2 * n) {
    throw ConfigError("dataset " + dataset + " is too short for k=" + std::to_string(k));
  }
  if (repeats == 0) throw ConfigError("robustness needs at least one repeat");
  const SequenceSlice train = data.sub(0, n);
  const SequenceSlice test = data.sub(n, n);
  const std::vector<std::int64_t> truth = true_ranks(test);
  PredictionCache predictions(train, test, config.thresholds);

  std::vector<ExperimentResult> rows;
  for (Structure s : config.structures) {
    if (is_learned(s)) continue;
    ExperimentResult r = run_structure(s, test, {}, truth, config);
    r.dataset = dataset;
    r.train = n;
    rows.push_back(std::move(r));
  }
  for (double t : t_values) {
    for (Structure s : config.structures) {
      if (!is_learned(s)) continue;
      const PredictionVector& base = predictions.for_structure(s);
      std::vector<double> costs;
      double merges = 0.0;
      std::int64_t eta = 0;
      double wall = 0.0;
      for (std::size_t rep = 0; rep < repeats; ++rep) {
        const PredictionVector bad = corrupt(base, t, n, base_seed + rep);
        const ExperimentResult r = run_structure(s, test, bad.ranks, truth, config);
        costs.push_back(r.amortized_cost);
        merges += static_cast<double>(r.merges);
        eta = std::max(eta, r.eta_max);
        wall += r.wall_seconds;
      }
      double mean = 0.0;
      for (double c : costs) mean += c;
      mean /= static_cast<double>(costs.size());
      double var = 0.0;
      for (double c : costs) var += (c - mean) * (c - mean);
      var /= static_cast<double>(costs.size());

      ExperimentResult row;
      row.structure = std::string(structure_name(s));
      row.dataset = dataset + "@t=" + format_percent(t);
      row.train = n;
      row.test = n;
      row.amortized_cost = mean;
      row.merges = static_cast<std::size_t>(std::llround(merges / static_cast<double>(repeats)));
      row.eta_max = eta;
      row.wall_seconds = wall;
      row.seed = base_seed;
      row.mean = mean;
      row.stddev = std::sqrt(var);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace lla::harness
