#pragma once

#include <stdexcept>

namespace rld {

/// Invalid parameters or malformed input. The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure: divergence, event location breakdown, estimator
/// starvation. The CLI maps this to exit code 2.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Filesystem or serialization failure. The CLI maps this to exit code 3.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace rld
