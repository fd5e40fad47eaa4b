#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "netpower/graph.hpp"

namespace netpower {

/// How a decided entity's control link is attributed for one draw.
enum class PivotRule {
  ShapleyOrder,   ///< the shareholder crossing the quota is the sole pivot
  JohnstonSplit,  ///< the link is split equally among the critical members of the winning prefix
};

struct SimulationConfig {
  int iterations = 1000;        ///< number of Monte Carlo draws, >= 1
  double damping = 0.5;         ///< d in (0,1); geometric decay along control chains
  double quota = 0.5;           ///< fraction of shares needed to decide an entity, in (0,1]
  std::uint64_t seed = 0;
  PivotRule pivot_rule = PivotRule::ShapleyOrder;
  bool include_own_endowments = true;  ///< keep each node's own value in its power score
};

/// One realized control link: `controller` decides `entity` with the given
/// attribution weight (1 under ShapleyOrder, 1/k per critical holder under
/// JohnstonSplit).
struct ControlLink {
  Index controller = 0;
  Index entity = 0;
  double weight = 1.0;
};

/// Sparse realization of the control matrix for a single iteration.
/// Entities whose shareholders cannot reach the quota have no link.
struct IterationDraw {
  std::vector<ControlLink> links;
};

/// Estimated value transmission between node pairs.
struct FlowEstimate {
  std::vector<std::string> ids;
  Matrix transmitted;     ///< transmitted(i, j): expected value of j carried by i; zero diagonal
  ScoreVector aggregate;  ///< row sums of `transmitted`; intermediary power per node
};

/// Rank agreement between two score vectors over the same node set.
struct ProfileComparison {
  double spearman = 1.0;     ///< Spearman correlation of average ranks
  double top_overlap = 1.0;  ///< |top-k(a) ∩ top-k(b)| / k
  std::vector<std::string> ids;
  std::vector<double> rank_delta;  ///< rank in b minus rank in a, per node (1 = strongest)
};

/// Draws one random control structure: each entity's shareholders are
/// visited in uniform random order and their stakes accumulated until the
/// quota is crossed; the attribution of the resulting link follows
/// `cfg.pivot_rule`.
IterationDraw draw_control_structure(const Network& net, const SimulationConfig& cfg,
                                     std::mt19937_64& rng);

/// Simulated pivotal-controller power: averages x = (I - d Y)^{-1} v over
/// random control structures Y, where v holds the node values. Deterministic
/// for a fixed seed regardless of thread count (NETPOWER_THREADS).
ScoreVector npi(const Network& net, const SimulationConfig& cfg);

/// Simulated value-flow decomposition: transmitted(i, j) averages the (i, j)
/// entry of (I - d Y)^{-1} scaled by v_j, with own-value diagonal removed.
FlowEstimate npf(const Network& net, const SimulationConfig& cfg);

/// Compares two score profiles over the same ids. `top` is clamped to the
/// node count.
ProfileComparison compare_profiles(const ScoreVector& a, const ScoreVector& b, int top = 3);

}  // namespace netpower
