#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gdd {

enum class ErrorCode {
  DomainError,
  InvalidArgument,
  IntegrandNonFinite,
  InvalidFrequency,
  AccuracyNotMet,
  NoConvergence,
  MissingDecomposition,
  ClosedMethodInapplicable,
  ModeUndefined,
  NoBracket,
  ReferenceDisagreement,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IntegrandNonFinite: return "IntegrandNonFinite";
    case ErrorCode::InvalidFrequency: return "InvalidFrequency";
    case ErrorCode::AccuracyNotMet: return "AccuracyNotMet";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::MissingDecomposition: return "MissingDecomposition";
    case ErrorCode::ClosedMethodInapplicable: return "ClosedMethodInapplicable";
    case ErrorCode::ModeUndefined: return "ModeUndefined";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::ReferenceDisagreement: return "ReferenceDisagreement";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gdd
