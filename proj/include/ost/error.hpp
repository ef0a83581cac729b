#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ost {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input (graph files, tree files, CLI value syntax).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Structurally invalid input: well-formed text describing a graph or tree
/// the library refuses to work with.
class ValidationError : public Error {
 public:
  enum class Kind {
    self_loop,
    duplicate_edge,
    zero_weight,
    disconnected,
    node_out_of_range,
    bad_argument,
    mismatch,
  };

  ValidationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// An exhaustive method was asked to run on an instance above its size limit.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

}  // namespace ost
