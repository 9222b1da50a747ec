#include "wqed/error.hpp"

namespace wqed {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PoleAtK: return "PoleAtK";
    case ErrorCode::ChiralNoGap: return "ChiralNoGap";
    case ErrorCode::DegenerateOmega: return "DegenerateOmega";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::PoleAtZ: return "PoleAtZ";
    case ErrorCode::NotBoundCandidate: return "NotBoundCandidate";
    case ErrorCode::NoBoundState: return "NoBoundState";
    case ErrorCode::NotInGap: return "NotInGap";
    case ErrorCode::NotRealizable: return "NotRealizable";
    case ErrorCode::NotChiral: return "NotChiral";
    case ErrorCode::NotResonanceCandidate: return "NotResonanceCandidate";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::DivergentAnsatz: return "DivergentAnsatz";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace wqed
