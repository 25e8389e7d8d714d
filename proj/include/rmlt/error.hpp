#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmlt {

enum class ErrorCode {
  NotPrime,
  NotPrimePower,
  ReducibleModulus,
  UnsupportedSize,
  DivisionByZero,
  OutOfRange,
  BadPartition,
  NotDivisible,
  ArityMismatch,
  DegreeOverflow,
  DomainMismatch,
  FieldMismatch,
  ShrinkNotAllowed,
  ZeroFunction,
  EnumerationBudget,
  ArityTooSmall,
  InvalidConstraint,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::NotPrimePower: return "NotPrimePower";
    case ErrorCode::ReducibleModulus: return "ReducibleModulus";
    case ErrorCode::UnsupportedSize: return "UnsupportedSize";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::BadPartition: return "BadPartition";
    case ErrorCode::NotDivisible: return "NotDivisible";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::ShrinkNotAllowed: return "ShrinkNotAllowed";
    case ErrorCode::ZeroFunction: return "ZeroFunction";
    case ErrorCode::EnumerationBudget: return "EnumerationBudget";
    case ErrorCode::ArityTooSmall: return "ArityTooSmall";
    case ErrorCode::InvalidConstraint: return "InvalidConstraint";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rmlt
