#pragma once

#include <stdexcept>
#include <string>

namespace apifsm {

/// Base class of every diagnostic raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An error tied to a position in a source file.
class SourceError : public Error {
 public:
  SourceError(const std::string& category, const std::string& message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

class LexError : public SourceError {
 public:
  LexError(const std::string& message, int line, int column)
      : SourceError("lex error", message, line, column) {}
};

/// Violation of the one-operator-per-line / mandatory-braces layout rules.
class FormatError : public SourceError {
 public:
  FormatError(const std::string& message, int line, int column)
      : SourceError("format error", message, line, column) {}
};

class ParseError : public SourceError {
 public:
  ParseError(const std::string& message, int line, int column)
      : SourceError("parse error", message, line, column) {}
};

/// A syntactically valid construct that lies outside the analysed subset.
class UnsupportedError : public SourceError {
 public:
  UnsupportedError(const std::string& message, int line, int column)
      : SourceError("unsupported", message, line, column) {}
};

class UnknownSymbol : public Error {
 public:
  explicit UnknownSymbol(const std::string& name) : Error("unknown symbol '" + name + "'") {}
};

class UnknownOperation : public Error {
 public:
  UnknownOperation(const std::string& operation, const std::string& kind)
      : Error("no semantics for operation '" + operation + "' on collection kind '" + kind + "'") {}
};

class ArityError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration; the message starts with the offending field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IncomparableModels : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace apifsm
