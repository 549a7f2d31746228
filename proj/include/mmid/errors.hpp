#ifndef MMID_ERRORS_HPP
#define MMID_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmid {

// Base class for all library errors. Subclasses mirror the failure modes of
// the numerical pipeline so callers can map them to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numeric errors (CLI exit code 3).
struct NonFiniteInput : Error {
    using Error::Error;
};
struct RankDeficient : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct SizeMismatch : Error {
    using Error::Error;
};
struct SingularOperator : Error {
    using Error::Error;
};
struct StepSizeUnderflow : Error {
    using Error::Error;
};
struct NonFiniteState : Error {
    using Error::Error;
};
struct GridOutOfRange : Error {
    using Error::Error;
};
struct SamplerFailure : Error {
    using Error::Error;
};
struct ClassifierFailure : Error {
    using Error::Error;
};
struct BasisColumnRequested : Error {
    using Error::Error;
};

// The low-fidelity ensemble never realized the high-fidelity mode at a basis
// column (CLI exit code 4).
struct NoMatchingCluster : Error {
    std::size_t column;
    explicit NoMatchingCluster(std::size_t col)
        : Error("no low-fidelity sample matches the high-fidelity cluster at basis column " +
                std::to_string(col)),
          column(col) {}
};

// Configuration / IO errors (CLI exit code 2).
struct InvalidConfig : Error {
    using Error::Error;
};
struct InvalidWeights : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace mmid

#endif
