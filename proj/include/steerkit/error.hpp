#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace steerkit {

enum class ErrorKind {
  NotHermitian,
  TraceNotOne,
  NotPositive,
  NotXState,
  SpectrumNotReal,
  Unphysical,
  DomainError,
  SettingConstraintViolated,
  InvalidFunctionalForScenario,
  TightnessViolation,
  ExhaustedRejection,
  CampaignFailed,
  InvalidInput,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::TraceNotOne: return "TraceNotOne";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotXState: return "NotXState";
    case ErrorKind::SpectrumNotReal: return "SpectrumNotReal";
    case ErrorKind::Unphysical: return "Unphysical";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SettingConstraintViolated: return "SettingConstraintViolated";
    case ErrorKind::InvalidFunctionalForScenario: return "InvalidFunctionalForScenario";
    case ErrorKind::TightnessViolation: return "TightnessViolation";
    case ErrorKind::ExhaustedRejection: return "ExhaustedRejection";
    case ErrorKind::CampaignFailed: return "CampaignFailed";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

/// Every failure raised by the library. The message always starts with the
/// kind name, e.g. "NotPositive: min eigenvalue -0.1 < -1e-09".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Errors caused by the caller's input, as opposed to a violated property.
  bool is_input_error() const noexcept {
    switch (kind_) {
      case ErrorKind::NotHermitian:
      case ErrorKind::TraceNotOne:
      case ErrorKind::NotPositive:
      case ErrorKind::NotXState:
      case ErrorKind::Unphysical:
      case ErrorKind::DomainError:
      case ErrorKind::SettingConstraintViolated:
      case ErrorKind::InvalidFunctionalForScenario:
      case ErrorKind::InvalidInput:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorKind kind_;
};

}  // namespace steerkit
