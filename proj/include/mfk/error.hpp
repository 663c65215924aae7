#ifndef MFK_ERROR_HPP
#define MFK_ERROR_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mfk {

/// Every failure the library can signal. The CLI maps each code to exactly
/// one process exit status (see exit_status()).
enum class ErrorCode {
  ChordTooLong,
  DegenerateTriangle,
  ZeroVector,
  InvalidChain,
  ContactAtCenter,
  DivergentIntegral,
  Unreachable,
  BudgetExhausted,
  OffCircle,
  NoFingers,
  DegenerateCosts,
  TooFewSamples,
  InfeasibleGrasp,
  ParseError,
  ValidationError,
  UsageError,
  IoError,
};

inline constexpr std::array kAllErrorCodes = {
    ErrorCode::ChordTooLong,     ErrorCode::DegenerateTriangle,
    ErrorCode::ZeroVector,       ErrorCode::InvalidChain,
    ErrorCode::ContactAtCenter,  ErrorCode::DivergentIntegral,
    ErrorCode::Unreachable,      ErrorCode::BudgetExhausted,
    ErrorCode::OffCircle,        ErrorCode::NoFingers,
    ErrorCode::DegenerateCosts,  ErrorCode::TooFewSamples,
    ErrorCode::InfeasibleGrasp,  ErrorCode::ParseError,
    ErrorCode::ValidationError,  ErrorCode::UsageError,
    ErrorCode::IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ChordTooLong: return "ChordTooLong";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::InvalidChain: return "InvalidChain";
    case ErrorCode::ContactAtCenter: return "ContactAtCenter";
    case ErrorCode::DivergentIntegral: return "DivergentIntegral";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::OffCircle: return "OffCircle";
    case ErrorCode::NoFingers: return "NoFingers";
    case ErrorCode::DegenerateCosts: return "DegenerateCosts";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::InfeasibleGrasp: return "InfeasibleGrasp";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Process exit status for a failure: 1 for domain errors (geometry,
/// sampling, planning, filesystem), 2 for usage and input-document errors.
constexpr int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::UsageError:
      return 2;
    case ErrorCode::ChordTooLong:
    case ErrorCode::DegenerateTriangle:
    case ErrorCode::ZeroVector:
    case ErrorCode::InvalidChain:
    case ErrorCode::ContactAtCenter:
    case ErrorCode::DivergentIntegral:
    case ErrorCode::Unreachable:
    case ErrorCode::BudgetExhausted:
    case ErrorCode::OffCircle:
    case ErrorCode::NoFingers:
    case ErrorCode::DegenerateCosts:
    case ErrorCode::TooFewSamples:
    case ErrorCode::InfeasibleGrasp:
    case ErrorCode::IoError:
      return 1;
  }
  return 1;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mfk

#endif  // MFK_ERROR_HPP
