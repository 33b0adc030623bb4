#pragma once

#include <stdexcept>
#include <string>

namespace ckdv {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A field that must have zero mean (so that the periodic antiderivative
/// exists) does not.
class MeanValueError : public Error {
public:
    using Error::Error;
};

class SingularDispersion : public Error {
public:
    using Error::Error;
};

/// Bi(z) requested beyond the guarded range.
class OverflowGuard : public Error {
public:
    using Error::Error;
};

/// offset*s + F(z) <= 0 somewhere, so log f is undefined.
class DenominatorSignError : public Error {
public:
    using Error::Error;
};

/// Sup norm grew by more than the allowed factor in a single step.
class StepUnstable : public Error {
public:
    using Error::Error;
};

/// v <= -1/4, outside the small-u branch of v = u + u^2.
class BranchError : public Error {
public:
    using Error::Error;
};

/// The Neumann iteration for the resolvent did not converge.
class NoConvergence : public Error {
public:
    using Error::Error;
};

/// Amplitude left the small-data regime (|v| > v_max).
class AmplitudeGuard : public Error {
public:
    using Error::Error;
};

/// Requested radius not covered by a trajectory.
class OutOfRange : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace ckdv
