#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace icd {

// Base for every error raised by the library. Callers that only care about
// success/failure can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Zero-sized image handed to an operation that needs pixels.
class EmptyInputError : public Error {
public:
    using Error::Error;
};

// Non-finite or out-of-range values.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

// Width/height/channel mismatch between operands.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Missing or inconsistent configuration (absent mapping parameter, empty grid,
// zero trials, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Parameter outside its mathematical domain (L <= 0, u <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed file contents. Carries the byte offset where parsing stopped.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace icd
