#pragma once

#include <stdexcept>
#include <string>

namespace amhd {

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GridMismatch : public std::invalid_argument {
 public:
  GridMismatch() : std::invalid_argument("fields live on different grids") {}
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a step produces a non-finite coefficient.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double time, double max_amplitude);

  double time() const { return time_; }
  double max_amplitude() const { return max_amplitude_; }

 private:
  double time_;
  double max_amplitude_;
};

}  // namespace amhd
