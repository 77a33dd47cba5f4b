#pragma once

#include <stdexcept>
#include <string>

namespace nof {

// Base for all domain errors; the CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input stream (function/coloring/cover/report files).
class ParseError : public Error {
public:
    using Error::Error;
};

// Stream does not start with the expected magic token.
class MagicError : public ParseError {
public:
    using ParseError::ParseError;
};

// Header promises a different number of values than the stream carries.
class LengthError : public ParseError {
public:
    using ParseError::ParseError;
};

// A value in the stream is outside its declared range.
class ValueRangeError : public ParseError {
public:
    using ParseError::ParseError;
};

// Report file carries an unsupported format version.
class VersionError : public ParseError {
public:
    using ParseError::ParseError;
};

// Argument outside the declared domain of an operation.
class RangeError : public Error {
public:
    using Error::Error;
};

// Object violates a structural invariant (malformed fiber, size mismatch, ...).
class StructuralError : public Error {
public:
    using Error::Error;
};

// Operation only defined for two-coordinate functions.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Requested object exceeds the configured memory budget (NOF_LIMIT_MB).
class BudgetError : public Error {
public:
    using Error::Error;
};

// Caller violated a documented operation precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Impossible state reached; indicates a bug, never expected on valid input.
class InternalInvariantError : public Error {
public:
    using Error::Error;
};

}  // namespace nof
