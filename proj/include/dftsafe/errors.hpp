#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dftsafe {

/// Base class for all errors raised by the toolkit.
class DftError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Structural problem in a fault tree (also used for scenario wiring problems).
class ValidationError : public DftError {
   public:
    using DftError::DftError;
};

/// Syntax error in a textual input, carries the source position.
class ParseError : public DftError {
   public:
    ParseError(std::string const& message, std::size_t line, std::size_t column)
        : DftError(message + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line(line),
          column(column) {}

    std::size_t line;
    std::size_t column;
};

/// A basic event was failed before one of its left siblings in a SEQ.
class SeqViolationError : public DftError {
   public:
    using DftError::DftError;
};

class UnknownElementError : public DftError {
   public:
    using DftError::DftError;
};

class MissingParameterError : public DftError {
   public:
    using DftError::DftError;
};

/// Expected-time style query on a chain where the target is not reached almost surely.
class UndefinedMeasureError : public DftError {
   public:
    using DftError::DftError;
};

class StateSpaceLimitError : public DftError {
   public:
    using DftError::DftError;
};

/// Problems while resolving a scenario document (missing block FTs, ambiguous buses, ...).
class ScenarioError : public DftError {
   public:
    using DftError::DftError;
};

}  // namespace dftsafe
