#pragma once

#include <stdexcept>
#include <string>

namespace drs {

// Base for every library error; the CLI maps these to exit code 2 or 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class PoleError : public Error {
public:
    using Error::Error;
};

// Grid or step too coarse for the oscillation it has to resolve.
class ResolutionError : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

} // namespace drs
