#pragma once

#include <stdexcept>
#include <string>

namespace pirpnn {

/// Invalid argument or mismatched dimensions.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Least-squares system has no usable singular values.
class RankDeficiencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigenvector basis too ill-conditioned for the decoupled path.
class NotDiagonalizableError : public std::runtime_error {
 public:
  NotDiagonalizableError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// A time step could not be completed (singular stage system, non-convergence).
class StepFailure : public std::runtime_error {
 public:
  explicit StepFailure(const std::string& what, double last_residual = 0.0)
      : std::runtime_error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// A feature vector vanished identically, so the weight update is undefined.
class DegenerateFeatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown problem/solver names, malformed config files or flags.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too few usable data points for a fit.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pirpnn
