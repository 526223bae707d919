#pragma once

#include <stdexcept>
#include <string>

namespace sheathlab {

// Numerical failure with a machine-checkable kind, so callers (and the CLI
// exit-code mapping) can distinguish failure modes without string matching.
class SolverError : public std::runtime_error {
public:
  enum class Kind {
    BranchEscape,        // orbit left the admissible density branch
    NegativeV,           // pseudo-potential significantly negative along orbit
    NonConvergence,      // iteration budget exhausted
    Positivity,          // temperature (or density) lost positivity
    CharacteristicSign,  // a characteristic speed became >= 0
    InsufficientWindow,  // too few samples to fit a decay rate
    DegenerateFit,       // decay series sits at the floor; no rate to fit
  };

  SolverError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}

  Kind kind;
};

// The stationary problem has no solution for the given parameters.
class NonexistenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Configuration file / command line problem (maps to CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace sheathlab
