#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dunklpot {

/// Bad input to an operation (zero root, h >= r, unbounded support, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The operation needs a product Z2^d group (or a domain kind) it does not have.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Group closure, path simulation, or refinement exceeded its hard cap.
class NonTerminationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration could not be used (model file, truncation radius, CLI values).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A quantity that must converge under refinement did not.
class ToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear system assembly failed (singular rows, missing nodes).
class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal identity that must hold exactly did not. Indicates a bug.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " at byte " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace dunklpot
