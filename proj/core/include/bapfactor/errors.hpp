#pragma once

#include <stdexcept>
#include <string>

namespace bapfactor {

/// Malformed or incompatible input (dimension mismatch, rank-deficient basis,
/// violated preconditions).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An exact algorithm would need an enumeration beyond the configured cap.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iteration failed to reach its stationarity/termination criterion.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An external responder (oracle) returned data violating its contract.
struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A certification step found a violated bound that the caller asked to be
/// enforced rather than reported.
struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bapfactor
