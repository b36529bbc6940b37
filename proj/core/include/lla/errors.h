#ifndef LLA_ERRORS_H_
#define LLA_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lla {

// Raised when a structure is asked to hold more elements than it can.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed numeric text. `line()` is 0 when the caller supplied no line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Bad experiment configuration (too few rows, bad fraction, unknown kind...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed input data, or unwritable output.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Amortized cost requested before any insert was recorded.
class UndefinedCostError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace lla

#endif  // LLA_ERRORS_H_
