#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace verhulst {

enum class ErrorKind {
  InvalidArgument,   // parameters or configuration outside their domain
  InvalidData,       // malformed time series
  WrongBranch,       // operation not defined on this solution branch
  SingularInput,     // evaluation at the coth asymptote
  SingularRegion,    // integration interval contains the asymptote
  StepOverflow,      // integrator runaway guard tripped
  MapSingularity,    // 1 + R crossed zero inside an integration step
  CapacityTooSmall,  // observation at or above the assumed capacity
  DegenerateData,    // data cannot identify a positive growth rate
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidData: return "InvalidData";
    case ErrorKind::WrongBranch: return "WrongBranch";
    case ErrorKind::SingularInput: return "SingularInput";
    case ErrorKind::SingularRegion: return "SingularRegion";
    case ErrorKind::StepOverflow: return "StepOverflow";
    case ErrorKind::MapSingularity: return "MapSingularity";
    case ErrorKind::CapacityTooSmall: return "CapacityTooSmall";
    case ErrorKind::DegenerateData: return "DegenerateData";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` tells callers what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace verhulst
