#include "lla/harness/dataset.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <string_view>
#include <vector>

#include "lla/errors.h"
#include "lla/key.h"

namespace lla::harness {
namespace {

void split(std::string_view line, Delimiter delimiter, std::vector<std::string_view>& fields) {
  fields.clear();
  if (delimiter == Delimiter::kComma) {
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      std::string_view field = line.substr(start, comma == std::string_view::npos
                                                      ? std::string_view::npos
                                                      : comma - start);
      const auto first = field.find_first_not_of(" \t\r");
      const auto last = field.find_last_not_of(" \t\r");
      fields.push_back(first == std::string_view::npos ? std::string_view{}
                                                       : field.substr(first, last - first + 1));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return;
  }
  std::size_t pos = 0;
  while (true) {
    pos = line.find_first_not_of(" \t\r", pos);
    if (pos == std::string_view::npos) break;
    const std::size_t end = line.find_first_of(" \t\r", pos);
    fields.push_back(line.substr(pos, end == std::string_view::npos ? end : end - pos));
    if (end == std::string_view::npos) break;
    pos = end;
  }
}

bool parse_integer(std::string_view text, std::int64_t& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

std::string DatasetSpec::name() const { return path.stem().string(); }

SequenceSlice parse_dataset(std::istream& in, const DatasetSpec& spec) {
  std::vector<Key> keys;
  std::vector<std::string> stamps;
  std::vector<std::string_view> fields;
  std::string line;
  std::size_t line_no = 0;
  std::size_t skipped = 0;
  const std::size_t needed =
      std::max(spec.value_column, spec.timestamp_column.value_or(0)) + 1;

  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == '%') continue;
    if (skipped < spec.skip_rows) {
      ++skipped;
      continue;
    }
    split(line, spec.delimiter, fields);
    if (fields.size() < needed) {
      throw DataError("line " + std::to_string(line_no) + ": expected at least " +
                      std::to_string(needed) + " columns, found " +
                      std::to_string(fields.size()));
    }
    try {
      keys.push_back(fixed_point_parse(fields[spec.value_column], line_no));
    } catch (const ParseError& e) {
      throw DataError(e.what());
    }
    if (spec.timestamp_column) stamps.emplace_back(fields[*spec.timestamp_column]);
    // Without a timestamp sort the prefix is already final.
    if (!spec.timestamp_column && spec.max_rows && keys.size() >= *spec.max_rows) break;
  }

  if (spec.timestamp_column) {
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::int64_t> numeric(stamps.size());
    bool all_numeric = true;
    for (std::size_t i = 0; i < stamps.size() && all_numeric; ++i) {
      all_numeric = parse_integer(stamps[i], numeric[i]);
    }
    if (all_numeric) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return numeric[a] < numeric[b]; });
    } else {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return stamps[a] < stamps[b]; });
    }
    std::vector<Key> sorted(keys.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = keys[order[i]];
    keys = std::move(sorted);
  }
  if (spec.max_rows && keys.size() > *spec.max_rows) keys.resize(*spec.max_rows);
  for (std::size_t i = 0; i < keys.size(); ++i) keys[i].seq = i;
  return SequenceSlice{std::move(keys), 0};
}

SequenceSlice load_dataset(const DatasetSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw DataError("cannot read dataset " + spec.path.string());
  return parse_dataset(in, spec);
}

}  // namespace lla::harness
