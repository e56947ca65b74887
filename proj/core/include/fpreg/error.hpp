#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fpreg {

enum class ErrorKind {
  kInvalidArgument,
  kDimensionMismatch,
  kMissingBasisState,
  kNonHermitian,
  kDegenerateIntermediate,
  kAdiabaticityFailure,
  kInformationallyIncomplete,
  kOptimizationFailure,
  kDivisionByZero,
  kConfig,
  kIo,
};

std::string_view to_string(ErrorKind kind);

/// Library error carrying a machine-readable kind alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fpreg
