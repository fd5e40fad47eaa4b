#pragma once

#include <string>
#include <vector>

#include "netpower/graph.hpp"
#include "netpower/types.hpp"

namespace netpower {

/// Constraint family for the acquisition model.
///  IC   shares held by any controlled node (targets included) count toward
///       every control constraint.
///  IC2  shares held by targets stop counting toward controlling non-targets.
///  IC3  IC2, and reciprocal cross-holdings are struck: i's stake in j is
///       ignored whenever j also holds a stake in i.
///  CCP  control must be certified in an acyclic order: a node is either
///       anchored by buying its full threshold outright or justified by
///       stakes of nodes certified before it; no mixed purchases.
enum class AcquisitionVariant { IC, IC2, IC3, CCP };

struct AcquisitionProblem {
  Network net;
  std::vector<std::string> targets;
  /// Per-node control thresholds in (0, 1], aligned with net indices.
  Vector thresholds;
  /// Per-node positive price per unit of stake purchased.
  Vector prices;
  AcquisitionVariant variant = AcquisitionVariant::IC;

  static AcquisitionProblem build(Network net,
                                  std::vector<std::string> targets,
                                  Vector thresholds, Vector prices,
                                  AcquisitionVariant variant = AcquisitionVariant::IC);

  /// Same threshold and price for every node.
  static AcquisitionProblem uniform(Network net,
                                    std::vector<std::string> targets,
                                    double threshold = 0.5, double price = 1.0,
                                    AcquisitionVariant variant = AcquisitionVariant::IC);

  bool is_target(Index i) const { return target_flags[static_cast<size_t>(i)] != 0; }

  std::vector<char> target_flags;
};

struct AcquisitionPlan {
  /// Node ids in network order.
  std::vector<std::string> ids;
  /// Stake bought directly in each node.
  Vector purchases;
  /// Nodes under the acquirer's control (targets, chosen intermediaries, and
  /// under CCP everything the anchors certify).
  std::vector<char> controlled;
  double total_cost = 0.0;
};

/// Completes a fixed control choice with the cheapest stake purchases.
/// For IC/IC2/IC3 the ids name the controlled non-targets; targets are always
/// controlled and each controlled node j buys the part of its threshold not
/// covered by controlled holders. For CCP the ids name the anchors (targets
/// allowed) and the rest of the closure is derived. Throws SharesUnavailable
/// when a purchase exceeds a node's free float and Infeasible when CCP
/// anchors fail to certify every target.
AcquisitionPlan evaluate_plan(const AcquisitionProblem& prob,
                              const std::vector<std::string>& controlled_ids);

/// Exact minimum-cost plan by depth-first branch and bound over the control
/// choice, zero branch first, so cost ties resolve to the lexicographically
/// smallest choice vector. Throws TooLarge beyond 24 free nodes and
/// Infeasible when no choice satisfies every target.
AcquisitionPlan solve_min_cost_control(const AcquisitionProblem& prob);

}  // namespace netpower
