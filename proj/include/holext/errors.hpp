#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holext {

/// Failure categories surfaced by the library. The CLI maps input errors to
/// exit code 2 and everything else to exit code 3.
enum class ErrorCode {
  InvalidArgument,
  GreenUndefinedPolarSet,
  UnboundedSet,
  DimensionTooLarge,
  GammaPolar,
  DegreeGrowthViolated,
  WindowEmpty,
  AllStrataPolar,
  NoUniformStratum,
  NotSublinear,
  OutsideCertifiedDomain,
  InsufficientData,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GreenUndefinedPolarSet: return "GreenUndefinedPolarSet";
    case ErrorCode::UnboundedSet: return "UnboundedSet";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::GammaPolar: return "GammaPolar";
    case ErrorCode::DegreeGrowthViolated: return "DegreeGrowthViolated";
    case ErrorCode::WindowEmpty: return "WindowEmpty";
    case ErrorCode::AllStrataPolar: return "AllStrataPolar";
    case ErrorCode::NoUniformStratum: return "NoUniformStratum";
    case ErrorCode::NotSublinear: return "NotSublinear";
    case ErrorCode::OutsideCertifiedDomain: return "OutsideCertifiedDomain";
    case ErrorCode::InsufficientData: return "InsufficientData";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string stage = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        stage_(std::move(stage)) {}

  ErrorCode code() const noexcept { return code_; }

  /// Name of the pipeline stage that raised the error, empty outside
  /// the extension pipeline.
  const std::string& stage() const noexcept { return stage_; }

  Error with_stage(std::string stage) const {
    Error copy = *this;
    copy.stage_ = std::move(stage);
    return copy;
  }

 private:
  ErrorCode code_;
  std::string stage_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::InvalidArgument, message);
}

}  // namespace holext
