#ifndef HUBLAB_ERROR_HPP_
#define HUBLAB_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace hublab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// A configured size cap (vertices, distance entries) would be exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

// Path counts do not fit in 64 bits.
class OverflowError : public Error {
public:
    using Error::Error;
};

// Randomized stage never met its acceptance threshold.
class ResampleExhausted : public Error {
public:
    using Error::Error;
};

// A produced labeling failed cover verification.
class VerificationError : public Error {
public:
    using Error::Error;
};

// A structural invariant that must hold on every run was violated.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

} // namespace hublab

#endif // HUBLAB_ERROR_HPP_
