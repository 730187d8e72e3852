#pragma once

#include <stdexcept>
#include <string>

namespace rotstar {

/// A computed field took a non-finite value; the message names where.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The mass constraint could not be bracketed by the multiplier search.
class UnsolvableConstraint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rotstar
