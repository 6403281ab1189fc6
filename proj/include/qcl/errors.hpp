#pragma once

#include <stdexcept>
#include <string>

namespace qcl {

// Invalid parameter combination (e.g. Injective with M > N).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration or simulation would exceed the configured desk-scale cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition on the inputs does not hold.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class InterpolationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConditioningError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SearchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qcl
