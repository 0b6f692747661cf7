#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pomdebt {

enum class ErrorCode {
  RootNotFound,
  IoError,
  ParseError,
  EmptyKeywordSet,
  MalformedKeywordFile,
  DomainError,
  EmptyCorpus,
  EmptyTrainingSet,
  SingleClass,
  InvalidHyperparam,
  DimensionMismatch,
  ClassTooSmall,
  InvalidFraction,
  NonSquare,
  LengthMismatch,
  EmptyInput,
  InvalidMargin,
  UnsupportedConfidence,
  Precondition,
  MissingProbe,
  FetchError,
  NotFound,
  RateLimited,
  UnsupportedForge,
  NotReady,
  MissingLabel,
  SchemaError,
  UnknownCategory,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure the library reports. The code is the
/// stable, testable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Raised by forge clients; retry_after is in seconds (0 when unknown).
class RateLimitedError : public Error {
 public:
  RateLimitedError(double retry_after, const std::string& what)
      : Error(ErrorCode::RateLimited, what), retry_after_(retry_after) {}

  double retry_after() const noexcept { return retry_after_; }

 private:
  double retry_after_;
};

/// Errors tied to a line of an input file (keyword lists, JSONL corpora).
class LineError : public Error {
 public:
  LineError(ErrorCode code, std::size_t line, const std::string& what)
      : Error(code, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace pomdebt
