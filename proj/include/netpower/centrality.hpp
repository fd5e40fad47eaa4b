#pragma once

#include "netpower/graph.hpp"
#include "netpower/numerics.hpp"

namespace netpower {

/// Which incident edges a directed degree counts.
enum class DegreeDirection { Total, Out, In };

/// Shared options for the centrality family.
///
/// `weighted` switches every measure from the binary view of the network
/// (any edge counts as 1) to its edge weights: lengths for the geodesic
/// measures, capacities for flow betweenness, conductances for walk and
/// information centrality. `per_component` lets closeness and eccentricity
/// score each node against its reachable set instead of failing on
/// disconnected input. `direction` only affects degree on directed networks.
struct CentralityOptions {
  bool normalized = false;
  bool weighted = false;
  bool per_component = false;
  DegreeDirection direction = DegreeDirection::Total;
  numerics::SolveOptions solve{};
};

/// Edge count (or weight sum) at each node; directed networks sum both sides
/// under DegreeDirection::Total. Normalization divides by the maximum
/// possible count, N-1 (2(N-1) for directed totals), and refuses a
/// single-node network.
ScoreVector degree_centrality(const Network& net,
                              const CentralityOptions& opts = {});

/// Dominant eigenvector of the symmetrized adjacency, nonnegative with unit
/// 1-norm (there is no separate raw variant). Directed inputs are flagged
/// with params["symmetrized"]; params["eigenvalue"] records the eigenvalue.
/// On reducible networks the tie between components is broken toward the
/// one containing the lowest node id.
ScoreVector eigenvector_centrality(const Network& net,
                                   const CentralityOptions& opts = {});

/// 1 / (sum of geodesic distances to every other node); normalization
/// multiplies by N-1. Without `per_component` every node must reach every
/// other; with it, each node is scored against its reachable set (times its
/// size when normalized) and an isolated node scores 0.
ScoreVector closeness_centrality(const Network& net,
                                 const CentralityOptions& opts = {});

/// Sum over node pairs of the fraction of geodesics passing through the
/// node. Unordered pairs on undirected networks, ordered pairs on directed
/// ones; unreachable pairs are skipped. Normalization divides by the pair
/// count, (N-1)(N-2)/2 or (N-1)(N-2).
ScoreVector betweenness_centrality(const Network& net,
                                   const CentralityOptions& opts = {});

/// Sum over node pairs of the flow routed through the node by a maximum
/// flow between the pair (same pair convention as betweenness). The
/// normalized variant divides each node's total by the sum of the flow
/// values over the pairs that exclude it.
ScoreVector flow_betweenness(const Network& net,
                             const CentralityOptions& opts = {});

/// Current-flow betweenness: the current carried by the node when a unit
/// current is driven between each unordered pair of other nodes, summed over
/// pairs. Computed from one grounded-Laplacian inverse on the symmetrized
/// view; requires a connected network. Normalization divides by the pair
/// count.
ScoreVector walk_betweenness(const Network& net,
                             const CentralityOptions& opts = {});

/// Stephenson-Zelen information centrality on the symmetrized view: invert
/// X with x_ii = 1 + sum_j a_ij and x_ij = 1 - a_ij, then score
/// N / (N b_ii + tr B - 2 rowsum_i B). Requires a connected network of at
/// least two nodes. The normalized variant divides by the total, so it sums
/// to 1.
ScoreVector information_centrality(const Network& net,
                                   const CentralityOptions& opts = {});

/// 1 / (distance to the farthest node). Same connectivity contract as
/// closeness; an isolated node scores 0 under `per_component`. The values
/// already sit in (0, 1] on the binary view, so the normalized variant only
/// marks the flag.
ScoreVector eccentricity_centrality(const Network& net,
                                    const CentralityOptions& opts = {});

}  // namespace netpower
