#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spinlearn {

/// Invalid user-facing configuration; the CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure of an otherwise valid computation; CLI exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive step size fell below the representable minimum.
class IntegrationError : public NumericError {
 public:
  IntegrationError(const std::string& what, double time_reached)
      : NumericError(what), time_reached_(time_reached) {}

  double time_reached() const noexcept { return time_reached_; }

 private:
  double time_reached_;
};

/// Non-finite loss or activation during training.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, std::size_t epoch)
      : NumericError(what), epoch_(epoch) {}

  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

/// On-disk content does not match its recorded hash or layout.
class CorruptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinlearn
