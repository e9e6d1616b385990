#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wata {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// The carrier does not support the requested operation (e.g. neg over nat).
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// Index sets of matrix/vector operands do not line up.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Inputs violate a documented precondition.
class InputError : public Error {
public:
    using Error::Error;
};

/// a* requested outside the convergence domain of the scalar star.
class DivergentStarError : public Error {
public:
    using Error::Error;
};

/// A search or iteration guard was exceeded; shrink the inputs.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// Consistency check failed inside the library; indicates a bug, not bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

/// Malformed textual input. Positions are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : Error(msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace wata
