#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flatheat {

enum class ErrorCode {
  DegenerateBasis,
  InvalidParameter,
  NonPositiveTime,
  ToleranceUnreachable,
  ModeSurfaceMismatch,
  WrongLatticeClass,
  NotSimple,
  DegenerateCritical,
  UnstableStep,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateBasis: return "DegenerateBasis";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NonPositiveTime: return "NonPositiveTime";
    case ErrorCode::ToleranceUnreachable: return "ToleranceUnreachable";
    case ErrorCode::ModeSurfaceMismatch: return "ModeSurfaceMismatch";
    case ErrorCode::WrongLatticeClass: return "WrongLatticeClass";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::DegenerateCritical: return "DegenerateCritical";
    case ErrorCode::UnstableStep: return "UnstableStep";
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

}  // namespace flatheat
