#ifndef LLA_HARNESS_DATASET_H_
#define LLA_HARNESS_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "lla/predictors.h"

namespace lla::harness {

enum class Delimiter { kWhitespace, kComma };

// Where the values live in a plain-text table. Column indices are 0-based.
// Blank lines and lines starting with '#' or '%' are ignored; `skip_rows`
// drops that many further lines (headers).
struct DatasetSpec {
  std::filesystem::path path;
  std::size_t value_column = 0;
  std::optional<std::size_t> timestamp_column;
  Delimiter delimiter = Delimiter::kWhitespace;
  std::optional<std::size_t> max_rows;
  std::size_t skip_rows = 0;

  // File stem, used as the dataset label in results.
  std::string name() const;
};

// Parses values with fixed_point_parse and, when a timestamp column is set,
// stable-sorts rows by timestamp (numerically if every timestamp is an
// integer, lexicographically otherwise). Truncates to max_rows afterwards.
// Key seq numbers are the positions in the resulting order.
// Throws DataError naming the offending line.
SequenceSlice load_dataset(const DatasetSpec& spec);
SequenceSlice parse_dataset(std::istream& in, const DatasetSpec& spec);

}  // namespace lla::harness

#endif  // LLA_HARNESS_DATASET_H_
