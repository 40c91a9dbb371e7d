#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dcic {

// Every condition the library can reject is a distinct code, so callers
// (tests, the CLI exit-code mapping) never have to match on message text.
enum class ErrorCode {
  EmptyCell,
  InvalidValue,
  InvalidProbability,
  SchemaError,
  ParseError,
  UnknownCell,
  SelfCounterfactual,
  NotIdentified,
  OrderingRequired,
  NoLowerLevel,
  ConfigError,
  IoError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyCell: return "EmptyCell";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownCell: return "UnknownCell";
    case ErrorCode::SelfCounterfactual: return "SelfCounterfactual";
    case ErrorCode::NotIdentified: return "NotIdentified";
    case ErrorCode::OrderingRequired: return "OrderingRequired";
    case ErrorCode::NoLowerLevel: return "NoLowerLevel";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, std::string message) {
  throw Error(code, std::move(message));
}

}  // namespace dcic
