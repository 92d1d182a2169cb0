#pragma once

#include <stdexcept>
#include <string>

namespace fermi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad periods, missing lattice sites, unparsable coefficients.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An exact identity that must hold did not. Signals an engine bug.
class InternalCheckError : public Error {
public:
    using Error::Error;
};

/// Simple-eigenvalue assumption violated (gap below threshold).
class DegenerateError : public Error {
public:
    using Error::Error;
};

} // namespace fermi
