#pragma once

#include <stdexcept>
#include <string>

namespace dd {

// Bad run configuration (non-positive step constant, zero iteration budget, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A backend oracle broke its contract (non-finite dual value, missing primal
// at a zero-residual point).
struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally invalid instance data (malformed rule, self-loop, uncovered
// source position, ...).
struct InvalidInstanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sentence has no derivation under the grammar.
struct NoParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every tag sequence scores minus infinity under the tag model.
struct NoTaggingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Derivation count exceeds the enumeration cap of the tightened parse oracle.
struct CapExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graph cannot support the requested relaxation (disconnected 2..n subgraph,
// vertex 1 with fewer than two edges, no accepting phrase path).
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An edge set required to be a forest contains a cycle.
struct AcyclicityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A tree cover does not cover the full edge set.
struct CoverageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No structure pair satisfies the agreement constraints.
struct NoFeasiblePairError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exhaustive enumeration would exceed its structure budget.
struct BudgetExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed instance file; message carries path and line number.
struct FileFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dd
