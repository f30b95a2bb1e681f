#pragma once

#include <stdexcept>
#include <string>

namespace qss {

/// Malformed or out-of-range input (bad JSON, invalid parameters, precondition violations).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scheme's induced access structure differs from the structure it is checked against.
class StructuralMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Qubit budget or search bound exceeded.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qss
