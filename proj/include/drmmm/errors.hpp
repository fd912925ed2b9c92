#pragma once

#include <stdexcept>
#include <string>

namespace drmmm {

/// Base error. `code()` is a stable machine-readable tag; the CLI prints it
/// as `error:<code>: <message>` on a single line.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& m) : Error("parameter", m) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& m) : Error("parse", m) {}
};

class BoundError : public Error {
 public:
  explicit BoundError(const std::string& m) : Error("bound", m) {}
};

class CarryError : public Error {
 public:
  explicit CarryError(const std::string& m) : Error("carry", m) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& m) : Error("io", m) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& m) : Error("internal", m) {}
};

/// Raised when bits about to be shifted out are nonzero, i.e. the quotient
/// digit failed to clear the low window. Carries the iteration that tripped.
class ShiftValidityError : public Error {
 public:
  ShiftValidityError(const std::string& m, std::size_t iteration)
      : Error("shift", m), iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

}  // namespace drmmm
