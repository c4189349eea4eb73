#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spreadlab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (wrong field count, non-numeric token, bad magic).
/// Carries the 1-based line number when one applies.
class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_ = 0;
};

/// A numeric value outside its admissible range (e.g. a probability not in
/// [0,1]).
class DomainError : public Error {
public:
  DomainError(const std::string& message, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_ = 0;
};

/// An argument that violates an operation's precondition (k < 1, R < 1,
/// duplicate seed ids, node id out of range).
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// The object is not in a usable state for the request (e.g. sampling a
/// graph whose edge probabilities were never assigned, or a snapshot cache
/// that does not match its graph).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// The instance exceeds a hard capacity bound of an exact method.
class CapacityError : public Error {
public:
  using Error::Error;
};

/// File or stream I/O failure; the message names the path.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace spreadlab
