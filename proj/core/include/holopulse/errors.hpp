#pragma once

#include <stdexcept>
#include <string>

namespace holopulse {

// Base class for all library failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An argument lies outside the operation's domain (wrong segment time,
// angle out of range, non-normalized state, ...).
struct DomainError : Error {
    using Error::Error;
};

// Evaluation hit the cot(gamma) singularity with inconsistent inputs.
struct SingularityError : DomainError {
    using DomainError::DomainError;
};

// A schedule could not be compiled from the requested parameters.
struct CompileError : Error {
    using Error::Error;
};

// A numerical routine failed to reach its accuracy target, or an
// integrator invariant (positivity, step convergence) was violated.
struct NumericalError : Error {
    using Error::Error;
};

// File or format problem in the serialization layer.
struct IoError : Error {
    using Error::Error;
};

// Invalid command-line/config combination; the CLI maps this to exit code 2.
struct UsageError : Error {
    using Error::Error;
};

}  // namespace holopulse
