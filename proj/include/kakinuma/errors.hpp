//==============================================================================
// errors.hpp
// Exception hierarchy for the two-layer wave laboratory.  Each class maps to a
// distinct failure family so the CLI can translate them into exit codes:
//   ConfigError            -> exit 1 (bad input / config)
//   solver errors          -> exit 2 (NoConvergence, SingularBlock, NonZeroMean,
//                                     DegenerateFit, FlatBottomRequired)
//   physics aborts         -> exit 3 (NonCavitation, StabilityViolated)
//==============================================================================
#pragma once

#include <stdexcept>
#include <string>

namespace kakinuma {

// Base class for every error this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration / input files.
struct ConfigError : Error {
    using Error::Error;
};

// A quantity that must be mean-free over the periodic domain is not (needed
// to take spectral antiderivatives, and as a discretization-consistency canary
// for the regularization terms).
struct NonZeroMean : Error {
    using Error::Error;
};

// A layer thickness dropped below the configured floor h_min.
struct NonCavitation : Error {
    using Error::Error;
};

// A pointwise bordered-block solve failed; should be impossible for valid
// thicknesses and signals a corrupted state.
struct SingularBlock : Error {
    using Error::Error;
};

// The conjugate-gradient solve did not reach the requested tolerance.
struct NoConvergence : Error {
    NoConvergence(int iterations_, double residual_, const std::string& what_)
        : Error(what_), iterations(iterations_), residual(residual_) {}
    int iterations;
    double residual;
};

// The pointwise stability margin fell below the configured threshold.
struct StabilityViolated : Error {
    using Error::Error;
};

// Momentum diagnostics require a flat bottom.
struct FlatBottomRequired : Error {
    using Error::Error;
};

// A least-squares order fit was attempted on data below noise level.
struct DegenerateFit : Error {
    using Error::Error;
};

} // namespace kakinuma
