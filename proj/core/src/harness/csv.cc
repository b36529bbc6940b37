#include "lla/harness/csv.h"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lla/errors.h"

namespace lla::harness {
namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Dataset labels may contain commas (synthetic parameters).
std::string quoted(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, std::span<const ExperimentResult> results) {
  if (results.empty()) throw std::invalid_argument("no results to write");
  out << kCsvHeader << '\n';
  for (const ExperimentResult& r : results) {
    out << quoted(r.structure) << ',' << quoted(r.dataset) << ',' << r.train << ',' << r.test
        << ',' << fixed(r.amortized_cost) << ',' << r.merges << ',' << r.eta_max << ','
        << r.seed << ',' << (r.mean ? fixed(*r.mean) : "") << ','
        << (r.stddev ? fixed(*r.stddev) : "") << '\n';
  }
}

void emit_csv(std::span<const ExperimentResult> results, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  write_csv(out, results);
  out.flush();
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace lla::harness
