#pragma once

#include <map>
#include <optional>
#include <string>

#include "netpower/graph.hpp"
#include "netpower/numerics.hpp"
#include "netpower/types.hpp"

namespace netpower {

struct PropagationOptions {
  /// Restart probability complement for pagerank; must lie in (0, 1).
  double damping = 0.85;
  /// Walk decay for katz_influence / alpha_icon_controllers. When unset,
  /// defaults to 0.9 / spectral-radius (1.0 on nilpotent networks).
  std::optional<double> attenuation;
  numerics::SolveOptions solve;
};

/// Network control value: each node's direct holdings of other nodes' value
/// plus everything those holdings control in turn. Solves x = C v + C x where
/// C(i,j) is i's stake in j and v the node values. Acyclic networks are
/// evaluated by the terminating walk sum; cyclic ones through the linear
/// solver. Throws DivergentPropagation when the stake matrix has spectral
/// radius within 1e-9 of one.
ScoreVector ncv(const Network& net, const PropagationOptions& opts = {});

/// NCV with value that merely circulates inside strongly connected
/// cross-holding groups stripped out: recomputed on the network with
/// intra-component stakes removed. Equals ncv exactly on acyclic networks and
/// never exceeds it componentwise.
ScoreVector nncv(const Network& net, const PropagationOptions& opts = {});

/// Fixed point of score(i) = (1 - d) + d * sum over in-neighbors j of
/// score(j) / outdegree(j), the mean-one convention. Nodes without outgoing
/// edges spread their score uniformly over all nodes.
ScoreVector pagerank(const Network& net, const PropagationOptions& opts = {});

struct KatzResult {
  /// Cumulative influence over walks of every length: T = A (I - a A)^{-1},
  /// i.e. A + a A^2 + a^2 A^3 + ...; attenuation zero leaves T = A.
  Matrix influence;
  /// Row sums of the influence matrix.
  ScoreVector scores;
};

/// Throws AttenuationTooLarge when attenuation * spectral-radius reaches one.
KatzResult katz_influence(const Network& net, const PropagationOptions& opts = {});

struct FirmController {
  std::string controller;
  /// Cumulative (direct plus indirect, attenuated) stake of the controller.
  double stake = 0.0;
};

/// For each firm, the person whose cumulative Katz influence over it is
/// largest, provided it reaches the threshold; firms where nobody does are
/// absent from the result. Ties resolve to the lowest controller id.
std::map<std::string, FirmController> alpha_icon_controllers(
    const Network& net, const PropagationOptions& opts = {},
    double control_threshold = 0.5);

}  // namespace netpower
