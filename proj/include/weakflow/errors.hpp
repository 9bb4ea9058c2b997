#pragma once

#include <stdexcept>
#include <string>

namespace weakflow {

/// Invalid parameters or inputs. The CLI maps this family to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string &what) : std::invalid_argument(what) {}
};

/// Incidence angle below the critical angle of a total-internal-reflection field.
class RegimeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Grid too coarse to resolve phase winding.
class ResolutionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Zero calcite shift: the Stokes pointer carries no momentum information.
class DegeneratePointerError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Streamline seed placed at a phase singularity or amplitude zero.
class SingularSeedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace weakflow
