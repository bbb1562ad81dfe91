#pragma once

#include <stdexcept>
#include <string>

namespace acem {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (mesh or config). Carries the offending line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Mesh connectivity is inconsistent (dangling ids, inverted elements, ...).
class TopologyError : public Error {
 public:
  using Error::Error;
};

/// Degenerate element geometry (singular Jacobian, zero area, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Run configuration is invalid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Nonlinear solve failed after all bisections.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace acem
