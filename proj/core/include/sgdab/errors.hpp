#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sgdab {

// Inner solver iterates exceeded the finiteness/magnitude guard.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::string what, std::int64_t iteration)
      : std::runtime_error(std::move(what)), iteration_(iteration) {}
  std::int64_t iteration() const { return iteration_; }

 private:
  std::int64_t iteration_;
};

// Requested work exceeds a configured cap (oracle budget, backtrack cap).
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (LIBSVM, config).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string what, std::int64_t line)
      : std::runtime_error(std::move(what)), line_(line) {}
  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

}  // namespace sgdab
