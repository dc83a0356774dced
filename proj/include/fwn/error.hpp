#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fwn {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input data. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Structurally well-formed input that violates a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A fuzzified-wordnet file whose values contradict the membership invariants.
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// File or stream failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace fwn
