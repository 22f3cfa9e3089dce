#pragma once

#include <stdexcept>
#include <string>

namespace twopoint {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A constructor argument violates its precondition (non-positive sigma,
/// empty parameter list, bad range, ...).
class InvalidParameterError : public Error {
public:
    using Error::Error;
};

/// A sampled PSF fails validation: asymmetric, zero norm, non-finite
/// amplitudes, non-uniform grid.
class InvalidPsfError : public Error {
public:
    using Error::Error;
};

/// The superposition norm N = 2[1 + cos(phi) delta(s)] fell below the
/// degeneracy threshold; the density operator is ill-defined.
class DegenerateStateError : public Error {
public:
    using Error::Error;
};

/// A coefficient matrix does not describe a density operator
/// (negative eigenvalue or wrong trace).
class NotAStateError : public Error {
public:
    using Error::Error;
};

/// A requested quantity diverges in the requested limit. The message
/// carries the limiting law so callers can annotate output.
class DivergingLimitError : public Error {
public:
    using Error::Error;
};

/// The evaluation grid does not cover the required support.
class GridCoverageError : public Error {
public:
    using Error::Error;
};

/// The Sparrow criterion is vacuous for the requested coherence
/// (anti-phase superposition: the midpoint intensity is identically zero).
class DegenerateCriterionError : public Error {
public:
    using Error::Error;
};

/// A bracketing scan found no sign change.
class NoRootError : public Error {
public:
    using Error::Error;
};

/// Likelihood maximisation could not produce an estimate.
class EstimationFailedError : public Error {
public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace twopoint
