#pragma once

#include <stdexcept>
#include <string>

namespace cfgf {

// Error taxonomy shared by the library and the CLI. Each class maps to a
// distinct process exit code so scripted callers can branch on failure kind.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual const char* kind() const noexcept { return "error"; }
    virtual int exit_code() const noexcept { return 1; }
};

// Requested computation is outside the regime it is defined for
// (e.g. a critical-only profile invoked with s != n/2, or any driver
// asked to run supercritical s > n/2).
class RegimeError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "regime"; }
    int exit_code() const noexcept override { return 3; }
};

// Work would exceed a configured budget (mode count, oracle matrix size).
class CapacityError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "capacity"; }
    int exit_code() const noexcept override { return 4; }
};

// Grid too coarse for the requested measurement.
class ResolutionError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "resolution"; }
    int exit_code() const noexcept override { return 5; }
};

// Structurally invalid parameter value (n < 1, L <= 0, a < 1, non-PSD ...).
class ParamError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "param"; }
    int exit_code() const noexcept override { return 6; }
};

// A documented operation precondition was violated by the caller.
class PreconditionError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "precondition"; }
    int exit_code() const noexcept override { return 7; }
};

}  // namespace cfgf
