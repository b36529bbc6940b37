#ifndef LLA_HARNESS_CSV_H_
#define LLA_HARNESS_CSV_H_

#include <filesystem>
#include <iosfwd>
#include <span>

#include "lla/harness/experiment.h"

namespace lla::harness {

inline constexpr const char* kCsvHeader =
    "structure,dataset,train,test,amortized_cost,merges,eta_max,seed,mean,stddev";

// Header plus one row per result, in the given order. Wall time is left out
// so reruns are byte-identical. Throws std::invalid_argument on an empty
// result list.
void write_csv(std::ostream& out, std::span<const ExperimentResult> results);
// Throws DataError when the file cannot be written.
void emit_csv(std::span<const ExperimentResult> results, const std::filesystem::path& path);

}  // namespace lla::harness

#endif  // LLA_HARNESS_CSV_H_
