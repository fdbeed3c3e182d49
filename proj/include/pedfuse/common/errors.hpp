#pragma once

#include <stdexcept>

namespace pedfuse {

// Error classes map onto CLI exit codes: usage errors are 2 (handled by the
// argument parser), DataError is 3, NumericError is 4, IoError is 5.
// Contract violations (bad shapes, bad preconditions) throw
// std::invalid_argument and exit as data errors.

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pedfuse
