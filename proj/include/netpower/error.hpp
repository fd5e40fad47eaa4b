#pragma once

#include <stdexcept>
#include <string>

namespace netpower {

/// Failure categories. Validation failures are caused by rejected input,
/// numerical failures by computations that cannot produce a trustworthy
/// result. The CLI maps them onto exit codes 1 and 2 respectively.
enum class ErrorKind { Validation, Numerical };

enum class ErrorCode {
  // input and structural validation
  DuplicateNode,
  DuplicateEdge,
  UnknownEndpoint,
  NegativeWeight,
  OwnershipOverflow,
  SelfLoopInOwnership,
  UnknownNode,
  UnknownPlayer,
  EmptyNetwork,
  ParseError,
  SingletonNetwork,
  DisconnectedGraph,
  NegativeEdgeLength,
  EmptyDistribution,
  KOutOfRange,
  TooManyPlayers,
  TooManyNodes,
  BadQuota,
  BadParameter,
  MismatchedNodes,
  TooLarge,
  Infeasible,
  SharesUnavailable,
  CycleDetected,
  // numerical failures
  SingularMatrix,
  NoConvergence,
  ZeroMatrix,
  AllPowerless,
  NoVulnerableCoalitions,
  CycleDepthExceeded,
  DivergentPropagation,
  AttenuationTooLarge,
  SingularDraw,
};

ErrorKind kind_of(ErrorCode code) noexcept;

/// Stable symbolic name, e.g. "DivergentPropagation". Used in error documents.
const char* name_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return kind_of(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace netpower
