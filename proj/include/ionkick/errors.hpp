#pragma once

#include <stdexcept>
#include <string>

namespace ionkick {

// Zero-norm state or zero-probability measurement branch.
class ZeroNormError : public std::runtime_error {
 public:
  ZeroNormError(const std::string& what, double probability)
      : std::runtime_error(what), probability_(probability) {}
  double probability() const { return probability_; }

 private:
  double probability_;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base for failures of the numeric backend. The CLI maps these to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegratorError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, std::size_t steps, double infidelity)
      : NumericError(what), steps_(steps), infidelity_(infidelity) {}
  std::size_t steps() const { return steps_; }
  double infidelity() const { return infidelity_; }

 private:
  std::size_t steps_;
  double infidelity_;
};

// Invalid experiment configuration; path names the offending field, e.g. "physics.eta".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::invalid_argument(path.empty() ? message : path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace ionkick
