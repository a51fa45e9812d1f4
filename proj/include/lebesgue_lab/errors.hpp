#pragma once

#include <stdexcept>
#include <string>

namespace lebesgue_lab {

/// Argument outside the mathematical domain of an operation (x outside
/// [0, 1/2], y outside (0, 1), l too small to evaluate, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A theorem hypothesis is not met (e.g. certification asked for l < 6).
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A verified inequality failed numerically. Never expected on correct
/// numerics; carries a human readable description of the failing record.
class verification_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Holder exponents requested for an instance that is not in the split case.
class case_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Result length of a convolution exceeds the configured cap.
class overflow_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Random instance generation gave up after its rejection limit.
class generation_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lebesgue_lab
