#include "netpower/error.hpp"

namespace netpower {

ErrorKind kind_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularMatrix:
    case ErrorCode::NoConvergence:
    case ErrorCode::ZeroMatrix:
    case ErrorCode::AllPowerless:
    case ErrorCode::NoVulnerableCoalitions:
    case ErrorCode::CycleDepthExceeded:
    case ErrorCode::DivergentPropagation:
    case ErrorCode::AttenuationTooLarge:
    case ErrorCode::SingularDraw:
      return ErrorKind::Numerical;
    default:
      return ErrorKind::Validation;
  }
}

const char* name_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateNode: return "DuplicateNode";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::OwnershipOverflow: return "OwnershipOverflow";
    case ErrorCode::SelfLoopInOwnership: return "SelfLoopInOwnership";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownPlayer: return "UnknownPlayer";
    case ErrorCode::EmptyNetwork: return "EmptyNetwork";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SingletonNetwork: return "SingletonNetwork";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NegativeEdgeLength: return "NegativeEdgeLength";
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::KOutOfRange: return "KOutOfRange";
    case ErrorCode::TooManyPlayers: return "TooManyPlayers";
    case ErrorCode::TooManyNodes: return "TooManyNodes";
    case ErrorCode::BadQuota: return "BadQuota";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::MismatchedNodes: return "MismatchedNodes";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::SharesUnavailable: return "SharesUnavailable";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::AllPowerless: return "AllPowerless";
    case ErrorCode::NoVulnerableCoalitions: return "NoVulnerableCoalitions";
    case ErrorCode::CycleDepthExceeded: return "CycleDepthExceeded";
    case ErrorCode::DivergentPropagation: return "DivergentPropagation";
    case ErrorCode::AttenuationTooLarge: return "AttenuationTooLarge";
    case ErrorCode::SingularDraw: return "SingularDraw";
  }
  return "Unknown";
}

}  // namespace netpower
