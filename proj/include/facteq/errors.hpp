#pragma once

#include <stdexcept>

namespace facteq {

// Malformed or out-of-contract input (CLI exit code 1).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A configured memory or time budget would be exceeded.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input data is internally inconsistent (e.g. a non-integral modified
// discriminant).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace facteq
