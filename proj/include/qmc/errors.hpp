#pragma once

#include <stdexcept>
#include <string>

namespace qmc {

// A matrix that fails the density-matrix checks (Hermiticity, unit trace,
// positivity beyond the eigenvalue floor).
class InvalidStateError : public std::invalid_argument {
 public:
  explicit InvalidStateError(const std::string& what) : std::invalid_argument(what) {}
};

// Operands whose shapes or qubit counts do not line up.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Channel or memory parameters outside their admissible range.
class ParameterError : public std::domain_error {
 public:
  explicit ParameterError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace qmc
