#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmas {

/// Failure categories surfaced by the library and mapped to CLI exit codes.
enum class ErrorCategory {
  InvalidDimension,
  InvalidParameter,
  InvalidInput,
  OutOfRange,
  Capability,
  EmptyNetwork,
  DegenerateConnectivity,
  DesignFailure,
  Configuration,
  Parse,
  Io,
};

constexpr std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::InvalidDimension: return "invalid-dimension";
    case ErrorCategory::InvalidParameter: return "invalid-parameter";
    case ErrorCategory::InvalidInput: return "invalid-input";
    case ErrorCategory::OutOfRange: return "out-of-range";
    case ErrorCategory::Capability: return "capability";
    case ErrorCategory::EmptyNetwork: return "empty-network";
    case ErrorCategory::DegenerateConnectivity: return "degenerate-connectivity";
    case ErrorCategory::DesignFailure: return "design-failure";
    case ErrorCategory::Configuration: return "configuration";
    case ErrorCategory::Parse: return "parse";
    case ErrorCategory::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& what) {
  throw Error(category, what);
}

}  // namespace rmas
