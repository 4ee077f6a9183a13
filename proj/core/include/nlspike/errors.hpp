#pragma once

#include <stdexcept>
#include <string>

namespace nlspike {

/// Neither the derivative nor the density route can evaluate a coefficient:
/// the non-linearity lacks derivatives and the noise lacks a smooth density.
class NoApplicableMethod : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative solver exhausted its budget without meeting its tolerance.
class NotConverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No information coefficient above tolerance up to the requested order.
class IndexNotDetected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlspike
