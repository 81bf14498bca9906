#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gvlam {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax error in any of the textual inputs (terms, types, theories, proofs).
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

using Path = std::vector<std::size_t>;

std::string format_path(const Path& path);

// Typing failure; `path` addresses the offending subterm from the root.
class TypeError : public Error {
 public:
  TypeError(const std::string& msg, Path path)
      : Error("at " + format_path(path) + ": " + msg), reason_(msg), path_(std::move(path)) {}

  const std::string& reason() const { return reason_; }
  const Path& path() const { return path_; }

 private:
  std::string reason_;
  Path path_;
};

// Rule misapplication inside a V-equation proof; `path` addresses the proof node.
class ProofError : public Error {
 public:
  ProofError(const std::string& msg, Path path)
      : Error("proof node " + format_path(path) + ": " + msg), reason_(msg), path_(std::move(path)) {}

  const std::string& reason() const { return reason_; }
  const Path& path() const { return path_; }

 private:
  std::string reason_;
  Path path_;
};

// A file could not be read.
class IoError : public Error {
 public:
  using Error::Error;
};

class QuantaleError : public Error {
 public:
  using Error::Error;
};

// Raised when two symbolic bounds cannot be ordered from their enclosures.
class IndeterminateComparison : public QuantaleError {
 public:
  using QuantaleError::QuantaleError;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class GuardExceeded : public ModelError {
 public:
  using ModelError::ModelError;
};

// Rewrite step did not match, or a schema row was used with bad bindings.
class RewriteError : public Error {
 public:
  using Error::Error;
};

}  // namespace gvlam
