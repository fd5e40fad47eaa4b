#pragma once

#include <map>
#include <string>
#include <vector>

#include "netpower/graph.hpp"
#include "netpower/types.hpp"

namespace netpower {

/// A normalized allocation of some quantity (shares outstanding, market value,
/// voting rights) across named actors.
struct ShareDistribution {
  std::vector<std::string> ids;
  Vector shares;

  /// Validates: at least one actor, every share nonnegative, total within
  /// 1e-9 of one. Throws EmptyDistribution / BadParameter.
  static ShareDistribution build(std::vector<std::string> ids, Vector shares);

  /// Normalizes raw nonnegative amounts by their total. Throws
  /// EmptyDistribution when there is nothing to normalize and BadParameter
  /// when an amount is negative or the total is zero.
  static ShareDistribution from_amounts(std::vector<std::string> ids,
                                        Vector amounts);

  int size() const { return static_cast<int>(ids.size()); }
};

/// Sum of squared shares. 1/n for a uniform split, 1 for a monopoly.
double hhi(const ShareDistribution& dist);

/// Combined share of the k largest actors (descending share, ties by id).
/// Throws KOutOfRange unless 1 <= k <= n.
double top_k(const ShareDistribution& dist, int k);

/// Smallest group of actors whose combined share reaches a target fraction.
struct ConcentrationGroup {
  /// Group size as a percentage of all actors.
  double g = 0.0;
  /// Members in descending share order (ties by id).
  std::vector<std::string> members;
};

/// Minimal prefix of the descending-sorted distribution whose cumulative
/// share reaches H (ties at the boundary count as reaching it). Requires
/// 0 < H <= 1.
ConcentrationGroup nci(const ShareDistribution& dist, double H);

/// How a chain of stakes must clear the control threshold when tracing
/// ownership upward: every link individually, or the product of the links.
enum class ControlChainRule { WeakestLink, Product };

struct UltimateOwner {
  /// End of the controlling chain starting at the queried node.
  std::string owner;
  /// Walk from the node's direct controller up to the owner (empty when the
  /// node controls itself).
  std::vector<std::string> chain;
  /// True when some step chose between equal largest stakes (lowest id wins).
  bool tie_break = false;
};

/// Traces each node's controlling shareholders upward: a holder controls a
/// node when its stake clears the threshold under the given rule; the walk
/// repeatedly moves to the largest controlling holder until no holder
/// qualifies. Requires an ownership network and threshold in (0,1).
/// Throws CycleDetected when the walk revisits a node.
std::map<std::string, UltimateOwner> ultimate_control(
    const Network& net, double threshold = 0.20,
    ControlChainRule rule = ControlChainRule::WeakestLink);

}  // namespace netpower
