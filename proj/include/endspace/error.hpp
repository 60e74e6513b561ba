#pragma once

#include <stdexcept>
#include <string>

namespace endspace {

enum class ErrorCode {
  OverflowBeyondSupportedHeight,
  InvalidAddress,
  InvalidSpec,
  InvalidHighRay,
  ParseError,
  NotUniform,
  NotFiniteAdhesion,
  TemplateOutsideTree,
  SpecMismatch,
  LimitNode,
  EqualEnds,
  PrefixNotInTruncation,
  TooLarge,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg)
      : Error(ErrorCode::ParseError,
              std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace endspace
