#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace latsar {

/// Weight vectors or matrices violating the model constraints
/// (negative entries, l1 norm reaching one, row sums reaching one).
class ConstraintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input data. Carries a 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, long line = -1)
      : std::runtime_error(line >= 0 ? what + " (line " + std::to_string(line) + ")"
                                     : what),
        line_(line) {}

  long line() const { return line_; }

 private:
  long line_;
};

/// Numerical failure: singular factorization, residual out of tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iteration budget exhausted. Carries the last iterate and its stationarity
/// residual so callers can decide whether the partial answer is usable.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate,
                   double kkt_residual)
      : NumericalError(what),
        last_iterate_(std::move(last_iterate)),
        kkt_residual_(kkt_residual) {}

  const std::vector<double>& last_iterate() const { return last_iterate_; }
  double kkt_residual() const { return kkt_residual_; }

 private:
  std::vector<double> last_iterate_;
  double kkt_residual_;
};

/// A request outside what this implementation can serve.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace latsar
