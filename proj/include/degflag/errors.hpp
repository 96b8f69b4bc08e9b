#pragma once

#include <stdexcept>
#include <string>

namespace degflag {

/// Malformed input data: wrong slot sizes, unsupported elements, shape
/// mismatches.  Distinct from a well-formed object merely failing a predicate.
struct structural_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A precondition documented on the operation does not hold (invalid rank,
/// non-admissible collection, non-flag input).
struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The request exceeds a configured capacity guard (exact-path rank cap,
/// oracle dimension cap, full cell table beyond n=6).
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A randomly chosen evaluation point hit a vanishing denominator; the caller
/// is expected to resample.
struct resample_required : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An internal identity that is guaranteed by theory failed (e.g. a fixed
/// point sum left a nonzero remainder).  Always a bug, never user error.
struct consistency_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace degflag
