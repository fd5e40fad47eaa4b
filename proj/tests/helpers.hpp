#pragma once

#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "netpower/graph.hpp"

namespace helpers {

using netpower::Edge;
using netpower::Index;
using netpower::Network;
using netpower::NetworkOptions;
using netpower::NodeKind;
using netpower::NodeRecord;

/// Zero-padded names so that sorted id order equals numeric order.
inline std::string node_name(int i) {
  std::string s = std::to_string(i);
  while (s.size() < 3) s.insert(s.begin(), '0');
  return "n" + s;
}

inline std::vector<NodeRecord> plain_nodes(int n, double value = 0.0,
                                           NodeKind kind = NodeKind::Firm) {
  std::vector<NodeRecord> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back({node_name(i), kind, value});
  return nodes;
}

inline Network graph_from(int n,
                          const std::vector<std::tuple<int, int, double>>& edges,
                          bool directed = false, bool ownership = false) {
  std::vector<Edge> es;
  for (const auto& [s, t, w] : edges) es.push_back({node_name(s), node_name(t), w});
  return Network::build(plain_nodes(n), std::move(es), {directed, ownership});
}

/// Connected undirected (or weakly connected directed) graph: a random
/// attachment tree plus extra random edges. Weighted mode draws integer
/// weights in {1,2,3} so geodesic ties stay exact in floating point.
inline Network random_connected(std::mt19937_64& rng, int n, bool directed,
                                bool weighted, double extra_edge_prob = 0.25) {
  std::vector<std::tuple<int, int, double>> edges;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  auto weight = [&]() {
    return weighted ? double(1 + rng() % 3) : 1.0;
  };
  auto add = [&](int a, int b) {
    edges.emplace_back(a, b, weight());
    used[a][b] = true;
    if (!directed) used[b][a] = true;
  };
  for (int v = 1; v < n; ++v) {
    int u = int(rng() % v);
    if (directed && rng() % 2) add(v, u);
    else add(u, v);
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b || used[a][b]) continue;
      if (!directed && a > b) continue;
      if (unif(rng) < extra_edge_prob) add(a, b);
    }
  }
  return graph_from(n, edges, directed, false);
}

inline Network random_tree(std::mt19937_64& rng, int n) {
  std::vector<std::tuple<int, int, double>> edges;
  for (int v = 1; v < n; ++v) edges.emplace_back(int(rng() % v), v, 1.0);
  return graph_from(n, edges, false, false);
}

/// Random ownership network: persons hold firms and firms may hold firms,
/// with incoming shares per firm capped at 1.
inline Network random_ownership(std::mt19937_64& rng, int persons, int firms,
                                double edge_prob = 0.5) {
  const int n = persons + firms;
  std::vector<NodeRecord> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back({node_name(i), i < persons ? NodeKind::Person : NodeKind::Firm,
                     i < persons ? 0.0 : 1.0});
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Edge> edges;
  for (int j = persons; j < n; ++j) {
    double room = 1.0;
    for (int i = 0; i < n && room > 0.05; ++i) {
      if (i == j) continue;
      if (unif(rng) < edge_prob) {
        double stake = 0.05 + unif(rng) * (room - 0.05);
        stake = std::min(stake, room);
        edges.push_back({node_name(i), node_name(j), stake});
        room -= stake;
      }
    }
  }
  return Network::build(std::move(nodes), std::move(edges), {true, true});
}

}  // namespace helpers
