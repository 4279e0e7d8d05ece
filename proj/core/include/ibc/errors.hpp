#pragma once

#include <stdexcept>
#include <string>

namespace ibc {

// Every failure raised by the library derives from Error so callers (the CLI
// in particular) can map the whole family onto a single exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

// The Gaussian integral over W_x stops converging, or a coefficient blew up.
class IntegrabilityError : public Error {
public:
    IntegrabilityError(const std::string& what, double t) : Error(what), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class TruncationError : public Error {
public:
    using Error::Error;
};

class RegimeError : public Error {
public:
    using Error::Error;
};

class DegenerateError : public Error {
public:
    using Error::Error;
};

class PoleError : public Error {
public:
    PoleError(const std::string& what, double t) : Error(what), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class SingularAmplitudeError : public Error {
public:
    using Error::Error;
};

class BranchError : public Error {
public:
    using Error::Error;
};

class CoverageError : public Error {
public:
    using Error::Error;
};

}  // namespace ibc
