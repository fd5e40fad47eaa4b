#pragma once

#include <map>
#include <string>
#include <vector>

#include "netpower/error.hpp"
#include "netpower/types.hpp"

namespace netpower {

enum class NodeKind { Person, Firm };

struct NodeRecord {
  std::string id;
  NodeKind kind = NodeKind::Firm;
  double value = 0.0;
};

struct Edge {
  std::string source;
  std::string target;
  double weight = 1.0;
};

struct NetworkOptions {
  bool directed = true;
  /// Ownership mode: edge weights are share fractions, an edge i->j carries
  /// the fraction of j held by i. Weights must lie in (0,1], self loops are
  /// rejected, and the shares held in any node may sum to at most 1 (with a
  /// 1e-9 tolerance for accumulated float error).
  bool ownership = false;
};

struct Shareholding {
  Index owner;
  double weight;
};

/// Immutable weighted graph. Nodes are stored sorted by id so that every
/// accessor, matrix row, and score vector has one deterministic order.
class Network {
 public:
  static Network build(std::vector<NodeRecord> nodes, std::vector<Edge> edges,
                       NetworkOptions options = {});

  Index size() const { return static_cast<Index>(nodes_.size()); }
  bool directed() const { return options_.directed; }
  bool ownership() const { return options_.ownership; }

  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const NodeRecord& node(Index i) const { return nodes_[static_cast<size_t>(i)]; }
  const std::string& id_of(Index i) const { return nodes_[static_cast<size_t>(i)].id; }
  const std::vector<std::string>& ids() const { return ids_; }

  bool has(const std::string& id) const { return index_.count(id) != 0; }
  /// Throws UnknownNode for ids outside the network.
  Index index_of(const std::string& id) const;

  /// Dense adjacency: A(i,j) is the weight of edge i->j (symmetric when the
  /// network is undirected).
  const Matrix& adjacency() const { return adjacency_; }
  /// Node endowments in id order.
  Vector values() const;

  /// Incoming holdings of node i, sorted by owner id.
  const std::vector<Shareholding>& in_edges(Index i) const {
    return in_[static_cast<size_t>(i)];
  }
  const std::vector<Shareholding>& out_edges(Index i) const {
    return out_[static_cast<size_t>(i)];
  }
  const std::vector<Shareholding>& shareholders_of(const std::string& id) const {
    return in_[static_cast<size_t>(index_of(id))];
  }

  /// Shares of node i not held by anyone (ownership mode).
  double free_float(Index i) const;

 private:
  Network() = default;

  std::vector<NodeRecord> nodes_;
  std::vector<std::string> ids_;
  std::vector<Edge> edges_;
  std::map<std::string, Index> index_;
  std::vector<std::vector<Shareholding>> in_;
  std::vector<std::vector<Shareholding>> out_;
  Matrix adjacency_;
  NetworkOptions options_;
};

/// Per-node scores for one measure, aligned with Network::ids().
struct ScoreVector {
  std::string measure;
  std::vector<std::string> ids;
  Vector scores;
  bool normalized = false;
  /// Conventions and derived flags recorded alongside the scores.
  std::map<std::string, std::string> params;

  double at(const std::string& id) const;
};

ScoreVector make_score_vector(const Network& net, std::string measure,
                              Vector scores, bool normalized);

/// Elementwise max(A, A^T) with a zeroed diagonal: the undirected view used
/// by spectral and current-flow measures.
Matrix symmetrized_adjacency(const Network& net);

/// Component label per node on the undirected view; labels are dense and
/// start at 0 in node order.
std::vector<int> connected_components(const Network& net);
int component_count(const std::vector<int>& labels);

/// Strongly connected component label per node (directed edges).
std::vector<int> strongly_connected_components(const Network& net);

}  // namespace netpower
