#pragma once

#include <stdexcept>
#include <string>

namespace hilbert {

/// Input data violates a structural requirement (e.g. a disconnected graph).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Reading or writing a file failed.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Optimization produced a non-finite or exploding loss.
class DivergenceError : public std::runtime_error {
public:
  DivergenceError(const std::string& what, int epoch, double learning_rate)
      : std::runtime_error(what), epoch_(epoch), learning_rate_(learning_rate) {}

  int epoch() const { return epoch_; }
  double learning_rate() const { return learning_rate_; }

private:
  int epoch_;
  double learning_rate_;
};

}  // namespace hilbert
