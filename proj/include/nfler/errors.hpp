// SPDX-License-Identifier: Apache-2.0
//
// nfler -- near-field low-exposure-region precoding toolkit.
// Exception taxonomy shared by all modules.

#pragma once

#include <stdexcept>
#include <string>

namespace nfler {

// Malformed or inconsistent configuration / usage (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A sample position coincides with an antenna element.
struct SingularGeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation requires at least two antennas (e.g. Fraunhofer distance).
struct DegenerateArrayError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ZF projection falls to the null vector (steering matrix spans the full space).
struct NullProjectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A precoder cannot satisfy its constraints (DoSP infeasible at k_init,
// ridge bracket failure, ...).  CLI exit code 3.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed-form denominator vanished: the user vector lies (numerically) inside
// the dominant subspace.  CLI exit code 3.
struct DegenerateSubspaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nfler
