#pragma once

#include <stdexcept>
#include <string>

namespace ropit {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Arithmetic between scalars of different moduli, or a value from the wrong field.
struct FieldMismatchError : Error {
    using Error::Error;
};

/// A structural invariant of a program or point set does not hold.
struct ValidationError : Error {
    using Error::Error;
};

/// Text input (formula or program file) is malformed.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"), position(position) {}
    explicit ParseError(const std::string& what) : Error(what), position(0) {}
    std::size_t position;
};

/// A mode's field-size or promise precondition is violated.
struct PreconditionError : Error {
    using Error::Error;
};

/// A configured enumeration/term/recursion cap was hit. Names the flag that raises it.
struct CapExceededError : Error {
    CapExceededError(const std::string& what, const std::string& flag)
        : Error(what + " (raise " + flag + ")"), flag(flag) {}
    std::string flag;
};

} // namespace ropit
