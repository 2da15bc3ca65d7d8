#pragma once

#include <stdexcept>
#include <string>

namespace mgeo {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file (bad row, bad header, duplicate cell). Carries the line number.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input data violates a documented precondition (non-positive price,
/// degenerate series, missing coverage, bad accounting inputs).
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration: unresolvable paths, bad scenario ranks,
/// infeasible window plans. Maps to CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed its own quality gate (embedding fidelity,
/// frontier solver convergence).
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace mgeo
