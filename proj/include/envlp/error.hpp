#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace envlp {

enum class ErrorCode {
  TooFewSamples,
  NonFiniteSample,
  LipschitzTooSmall,
  DimensionMismatch,
  TooFewConstraints,
  BudgetTooLarge,
  InvalidArgument,
  DegeneratePolygon,
  SelfIntersecting,
  NoIntersection,
  NonpositiveRadius,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NonFiniteSample: return "NonFiniteSample";
    case ErrorCode::LipschitzTooSmall: return "LipschitzTooSmall";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooFewConstraints: return "TooFewConstraints";
    case ErrorCode::BudgetTooLarge: return "BudgetTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegeneratePolygon: return "DegeneratePolygon";
    case ErrorCode::SelfIntersecting: return "SelfIntersecting";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::NonpositiveRadius: return "NonpositiveRadius";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace envlp
