#pragma once

#include <stdexcept>
#include <string>

namespace ddsync {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  CutLocus,
  NoSmallBall,
  EmptyRegion,
  UnsupportedDim,
  DepthSearchFailed,
  UnknownLabels,
  TooLarge,
  Disconnected,
  InfeasibleBudget,
  NoBreakpoint,
  Io,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers can branch
/// on it (e.g. skip a measurement on CutLocus) without parsing messages.
class SyncError : public std::runtime_error {
 public:
  SyncError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ddsync
