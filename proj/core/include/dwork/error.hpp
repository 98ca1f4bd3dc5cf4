#pragma once

#include <stdexcept>
#include <string>

namespace dwork {

enum class ErrorKind {
  NotPrime,
  UnsupportedPrime,
  ParamsMismatch,
  PrecisionBudgetExceeded,
  NoRoot,
  DivisionByZero,
  NotASubfield,
  RankDeficient,
  NotARelation,
  Timeout,
  NotTeichmueller,
  TwistOutsideCone,
  SupportTooSmall,
  LevelTooLarge,
  BudgetExceeded,
  NonUnitConstantTerm,
  InvalidArgument,
  ParseError,
  ValidationError,
};

const char* to_string(ErrorKind kind) noexcept;

// All library failures are reported through this type; kind() names the
// contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::UnsupportedPrime: return "UnsupportedPrime";
    case ErrorKind::ParamsMismatch: return "ParamsMismatch";
    case ErrorKind::PrecisionBudgetExceeded: return "PrecisionBudgetExceeded";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NotASubfield: return "NotASubfield";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotARelation: return "NotARelation";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::NotTeichmueller: return "NotTeichmueller";
    case ErrorKind::TwistOutsideCone: return "TwistOutsideCone";
    case ErrorKind::SupportTooSmall: return "SupportTooSmall";
    case ErrorKind::LevelTooLarge: return "LevelTooLarge";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NonUnitConstantTerm: return "NonUnitConstantTerm";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

}  // namespace dwork
