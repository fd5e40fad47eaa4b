#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "netpower/graph.hpp"
#include "netpower/types.hpp"

namespace netpower {

/// Simple weighted voting game: a coalition wins when its weight sum reaches
/// the quota (ties at the quota win). Games built from integer weights or
/// ratios compare exactly; the float path uses a 1e-12 comparison epsilon.
struct WeightedVotingGame {
  std::vector<std::string> players;
  std::vector<double> weights;
  double quota = 0.0;

  bool exact = false;
  std::vector<long long> integer_weights;
  long long integer_quota = 0;

  static WeightedVotingGame from_weights(std::vector<std::string> players,
                                         std::vector<double> weights,
                                         double quota);
  static WeightedVotingGame from_integer_weights(
      std::vector<std::string> players, std::vector<long long> weights,
      long long quota);
  /// Rational weights and quota as (numerator, denominator) pairs, scaled to
  /// a common integer grid so threshold comparisons are exact.
  static WeightedVotingGame from_ratios(
      std::vector<std::string> players,
      std::vector<std::pair<long long, long long>> weights,
      std::pair<long long, long long> quota);

  int size() const { return static_cast<int>(players.size()); }
  /// Winning test for the coalition encoded as a bitmask over player order.
  bool wins(std::uint32_t coalition) const;
};

/// Values of a power index, parallel to `players`. `raw` optionally carries
/// the unnormalized quantity behind `values` (swing counts, pivot weights,
/// absolute redistribution mass) and is empty when there is none.
struct PowerProfile {
  std::string index;
  std::vector<std::string> players;
  Vector values;
  Vector raw;

  double at(const std::string& player) const;
};

/// 1 when the named coalition wins the game, else 0.
int characteristic(const WeightedVotingGame& game,
                   const std::vector<std::string>& coalition);

/// Shapley-Shubik index by exact subset enumeration (players <= 20); `raw`
/// holds the integer permutation counts scaled by (n - |S| - 1)! |S|!.
PowerProfile shapley_shubik(const WeightedVotingGame& game);

/// Banzhaf index from exact swing counts (players <= 20). `raw` holds the
/// swing counts; `values` is eta / 2^(n-1), or eta / sum(eta) when
/// `normalized` is set.
PowerProfile banzhaf(const WeightedVotingGame& game, bool normalized = false);

/// Johnston index: every vulnerable coalition splits one unit equally among
/// its critical members; values are normalized, `raw` keeps the absolute
/// sums.
PowerProfile johnston(const WeightedVotingGame& game);

/// Per-node control quota as a fraction of total shares outstanding.
/// The default is a strict majority: holdings must exceed the fraction.
struct ControlRule {
  double fraction = 0.5;
  bool strict = true;
  double eps = 1e-12;

  bool satisfied(double shares) const {
    return strict ? shares > fraction + eps : shares >= fraction - eps;
  }
};

/// An ownership network together with the rule deciding when a coalition's
/// pooled shares control a node.
struct ControlStructure {
  Network net;
  ControlRule rule;

  static ControlStructure build(Network net, ControlRule rule = {});
};

/// Least fixed point of control: nodes whose shares held by the coalition
/// and its acquisitions reach the rule's quota. Members of the coalition
/// appear in the result only if they end up controlled themselves.
std::vector<std::string> control_closure(const ControlStructure& cs,
                                         const std::vector<std::string>& coalition);

/// Power over mutual control structures (nodes <= 16): each node's
/// Shapley-Shubik value summed over the per-node control games, minus one
/// for nodes the grand coalition controls. Profiles always sum to zero.
PowerProfile karos_peters_phi(const ControlStructure& cs);

enum class PiVariant { Pi, PiPrime };

/// Implicit-power index over ownership structures (nodes <= 16). Every
/// controlled entity hands its shareholders their absolute Johnston values;
/// value held by controlled corporate shareholders is then pushed down,
/// equally among their shareholders (Pi) or proportionally to those
/// shareholders' absolute Johnston values (PiPrime), for at most 32 rounds.
/// Entities whose shareholders cannot reach the quota are terminal and keep
/// whatever value reaches them. The result is normalized to sum 1; `raw`
/// keeps the absolute mass.
PowerProfile mercik_lobos_pi(const ControlStructure& cs,
                             PiVariant variant = PiVariant::Pi);

}  // namespace netpower
