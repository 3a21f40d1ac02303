#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace motionguide {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Frame/skeleton shape mismatch or a broken hierarchy.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Text input could not be parsed. `line()` is 1-based; 0 when unknown.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class RetargetError : public Error {
public:
    using Error::Error;
};

class NormalizeError : public Error {
public:
    using Error::Error;
};

class CompareError : public Error {
public:
    using Error::Error;
};

class VizError : public Error {
public:
    using Error::Error;
};

class SessionError : public Error {
public:
    using Error::Error;
};

}  // namespace motionguide
