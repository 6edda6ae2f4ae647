#pragma once

#include <stdexcept>
#include <string>

namespace ferroq {

/// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file or record. Carries a 1-based line number when the
/// problem is tied to a specific line of a text file (0 otherwise).
struct ParseError : Error {
    int line = 0;
    ParseError(int line_, const std::string& what_)
        : Error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what_ : what_),
          line(line_) {}
    explicit ParseError(const std::string& what_) : Error(what_) {}
};

/// Structurally valid input that violates a precondition (missing baseline,
/// resonance not bracketed, empty band, ...).
struct DataError : Error {
    using Error::Error;
};

/// Numerical failure: singular system, unbracketed root, non-convergence.
struct NumericalError : Error {
    using Error::Error;
};

} // namespace ferroq
