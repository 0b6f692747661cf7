#include "pomdebt/error.hpp"

namespace pomdebt {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::RootNotFound: return "RootNotFound";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyKeywordSet: return "EmptyKeywordSet";
    case ErrorCode::MalformedKeywordFile: return "MalformedKeywordFile";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::InvalidHyperparam: return "InvalidHyperparam";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::InvalidFraction: return "InvalidFraction";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidMargin: return "InvalidMargin";
    case ErrorCode::UnsupportedConfidence: return "UnsupportedConfidence";
    case ErrorCode::Precondition: return "Precondition";
    case ErrorCode::MissingProbe: return "MissingProbe";
    case ErrorCode::FetchError: return "FetchError";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::UnsupportedForge: return "UnsupportedForge";
    case ErrorCode::NotReady: return "NotReady";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
  }
  return "Unknown";
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : Error(ErrorCode::ParseError,
            std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

}  // namespace pomdebt
