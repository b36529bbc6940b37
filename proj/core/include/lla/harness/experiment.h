#ifndef LLA_HARNESS_EXPERIMENT_H_
#define LLA_HARNESS_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lla/harness/dataset.h"
#include "lla/learned_lla.h"
#include "lla/pma.h"
#include "lla/predictors.h"

namespace lla::harness {

// The four configurations compared by every experiment. The plain PMA/APMA
// baselines are learned LLAs that route everything to the first actual, so
// all four use the same memory.
enum class Structure { kPma, kApma, kLearnedPma, kLearnedApma };

std::string_view structure_name(Structure s);
std::optional<Structure> parse_structure(std::string_view name);
std::vector<Structure> all_structures();
bool is_learned(Structure s);

struct ExperimentResult {
  std::string structure;
  std::string dataset;
  std::size_t train = 0;
  std::size_t test = 0;
  double amortized_cost = 0.0;
  std::size_t merges = 0;
  std::int64_t eta_max = 0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> mean;
  std::optional<double> stddev;
  std::size_t witness_checks = 0;
  std::size_t witness_failures = 0;
};

struct ExperimentConfig {
  std::vector<Structure> structures = all_structures();
  PmaThresholds thresholds{};
  // Run witness_error_check after every merge of the learned configurations.
  bool check_witness = false;
  // Replace the baselines' first-actual routing with a standalone black box
  // of 6 * capacity slots.
  bool standalone_baselines = false;
};

LlaFactory factory_for(Structure s, const PmaThresholds& thresholds);

// True iff some key of the merged actual (sentinel excluded) has
// 2 * |predicted - true| >= number of ranks assigned to the merged node.
// Keys are looked up by seq in the two rank vectors.
bool witness_error_check(const MergeEvent& event, std::span<const std::int64_t> predicted,
                         std::span<const std::int64_t> truth);

// Runs one configuration over `test`. Learned configurations route by
// `predictions` (clamped to [1, |test|]); baselines ignore them. The
// sentinel is inserted first and never counted. eta_max is computed against
// `truth` for the predictions the configuration actually used.
ExperimentResult run_structure(Structure s, const SequenceSlice& test,
                               std::span<const std::int64_t> predictions,
                               std::span<const std::int64_t> truth,
                               const ExperimentConfig& config);

// Final predictions for `test`: predictor selection when |train| >= 4,
// predictor1 for shorter nonempty slices, all ones for an empty slice.
PredictionVector build_predictions(const SequenceSlice& train, const SequenceSlice& test,
                                   const LlaFactory& selection_factory);

// One row per configured structure with train = first 2^k rows of `data`,
// test = the next 2^k. Throws ConfigError when `data` is too short.
std::vector<ExperimentResult> run_table(const SequenceSlice& data, const std::string& dataset,
                                        std::size_t k, const ExperimentConfig& config);
std::vector<ExperimentResult> run_table(const DatasetSpec& spec, std::size_t k,
                                        const ExperimentConfig& config);

std::vector<ExperimentResult> run_scaling(const SequenceSlice& data, const std::string& dataset,
                                          std::size_t k_min, std::size_t k_max,
                                          const ExperimentConfig& config);

// Test slice = rows [2^test_k, 2^(test_k+1)); for each percentage f the
// training slice is the f% * 2^test_k rows right before it.
std::vector<ExperimentResult> run_learning_curve(const SequenceSlice& data,
                                                 const std::string& dataset, std::size_t test_k,
                                                 std::span<const double> percentages,
                                                 const ExperimentConfig& config);

// Baselines once; learned configurations once per (t, seed) with seeds
// base_seed .. base_seed + repeats - 1, reported as mean and population
// standard deviation per t. The dataset label of a learned row carries
// "@t=<t>".
std::vector<ExperimentResult> run_robustness(const SequenceSlice& data,
                                             const std::string& dataset, std::size_t k,
                                             std::span<const double> t_values,
                                             std::size_t repeats, std::uint64_t base_seed,
                                             const ExperimentConfig& config);

}  // namespace lla::harness

#endif  // LLA_HARNESS_EXPERIMENT_H_
