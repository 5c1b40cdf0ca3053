#pragma once

#include <stdexcept>
#include <string>

namespace pentawave {

/// Invalid parameters or configuration supplied by the caller.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point lies on (or numerically too close to) a grid line.
class OnBoundaryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Not enough independent data to fit a transform.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file or directory could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal numerical contract (e.g. a proven bound) was violated.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pentawave
