#include "ddsync/error.hpp"

namespace ddsync {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::CutLocus: return "CutLocus";
    case ErrorKind::NoSmallBall: return "NoSmallBall";
    case ErrorKind::EmptyRegion: return "EmptyRegion";
    case ErrorKind::UnsupportedDim: return "UnsupportedDim";
    case ErrorKind::DepthSearchFailed: return "DepthSearchFailed";
    case ErrorKind::UnknownLabels: return "UnknownLabels";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::InfeasibleBudget: return "InfeasibleBudget";
    case ErrorKind::NoBreakpoint: return "NoBreakpoint";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace ddsync
