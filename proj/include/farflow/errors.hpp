#ifndef FARFLOW_ERRORS_HPP
#define FARFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace farflow {

// Speed at or beyond the critical speed where the subsonic branch ends.
class NotSubsonicError : public std::domain_error {
 public:
  explicit NotSubsonicError(const std::string& what) : std::domain_error(what) {}
};

// Evaluation at the singular point of Q, a Kelvin map, or a fundamental solution.
class SingularPointError : public std::domain_error {
 public:
  explicit SingularPointError(const std::string& what) : std::domain_error(what) {}
};

// Mass flux with no subsonic root of rho(q^2) q = const.
class InfeasibleFluxError : public std::domain_error {
 public:
  explicit InfeasibleFluxError(const std::string& what) : std::domain_error(what) {}
};

// Inconsistent inputs: mismatched matrix pairs, bad mesh sizes, bad config values.
class ConfigurationError : public std::invalid_argument {
 public:
  explicit ConfigurationError(const std::string& what) : std::invalid_argument(what) {}
};

class UndefinedRatioError : public std::invalid_argument {
 public:
  explicit UndefinedRatioError(const std::string& what) : std::invalid_argument(what) {}
};

class InsufficientDataError : public std::invalid_argument {
 public:
  explicit InsufficientDataError(const std::string& what) : std::invalid_argument(what) {}
};

class LinearAlgebraError : public std::runtime_error {
 public:
  LinearAlgebraError(const std::string& what, double residual)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), update_history(std::move(history)) {}
  std::vector<double> update_history;
};

}  // namespace farflow

#endif  // FARFLOW_ERRORS_HPP
