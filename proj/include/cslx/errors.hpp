#pragma once

#include <stdexcept>
#include <string>

namespace cslx {

// Malformed input file (spectrum CSV, sidecar or config JSON).
// Carries the 1-based line number when one is known.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg, long line = 0)
      : std::runtime_error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}

  long line() const { return line_; }

 private:
  long line_;
};

// The fit has no information to constrain the amplitude
// (all counts zero, or fewer bins than the statistic needs).
class DegenerateFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An energy-window restriction left no bins.
class WindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cslx
