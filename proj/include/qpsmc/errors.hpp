#pragma once

#include <stdexcept>
#include <string>

namespace qpsmc {

// Input outside the physical or algorithmic domain (non-positive temperature,
// unknown symmetrization order, malformed config value, ...).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Two particles closer than the coincidence threshold; the r^-12 core is not
// representable there.
class SingularConfiguration : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Grid diagonalization failed its own refinement check.
class RefinementError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace qpsmc
