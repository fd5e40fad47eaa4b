#include "netpower/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netpower/error.hpp"

namespace netpower {
namespace {

constexpr double kGeodesicEps = 1e-12;

std::string format_param(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Matrix binarized(const Matrix& A) {
  return (A.array() > 0.0).cast<double>().matrix();
}

bool has_unit_weights(const Network& net) {
  const std::vector<Edge>& edges = net.edges();
  return std::all_of(edges.begin(), edges.end(),
                     [](const Edge& e) { return e.weight == 1.0; });
}

/// The network a measure should actually see: the input itself when weights
/// are honored (or already trivial), otherwise a unit-weight copy.
const Network& measured_view(const Network& net, bool weighted,
                             std::optional<Network>& storage) {
  if (weighted || has_unit_weights(net)) return net;
  std::vector<Edge> edges = net.edges();
  for (Edge& e : edges) e.weight = 1.0;
  NetworkOptions o;
  o.directed = net.directed();
  o.ownership = false;
  storage.emplace(Network::build(net.nodes(), edges, o));
  return *storage;
}

void annotate(ScoreVector& sv, const Network& net,
              const CentralityOptions& opts, bool symmetrizes) {
  if (opts.weighted) sv.params["weighted"] = "true";
  if (symmetrizes && net.directed()) sv.params["symmetrized"] = "true";
}

bool on_geodesic(const numerics::Geodesics& g, Index j, Index i, Index k) {
  if (g.counts(j, i) == 0.0 || g.counts(i, k) == 0.0) return false;
  const double through = g.dist(j, i) + g.dist(i, k);
  return std::abs(through - g.dist(j, k)) <=
         kGeodesicEps * std::max(1.0, std::abs(g.dist(j, k)));
}

}  // namespace

ScoreVector degree_centrality(const Network& net,
                              const CentralityOptions& opts) {
  numerics::check(opts.solve);
  const Index n = net.size();
  if (n == 1 && opts.normalized) {
    fail(ErrorCode::SingletonNetwork,
         "degree cannot be normalized on a single-node network");
  }
  Matrix A = net.adjacency();
  if (!opts.weighted) A = binarized(A);

  Vector score;
  double denom = static_cast<double>(n - 1);
  std::string direction = "total";
  if (!net.directed()) {
    score = A.rowwise().sum();
  } else {
    switch (opts.direction) {
      case DegreeDirection::Total:
        score = A.rowwise().sum() + A.colwise().sum().transpose();
        denom *= 2.0;
        break;
      case DegreeDirection::Out:
        score = A.rowwise().sum();
        direction = "out";
        break;
      case DegreeDirection::In:
        score = A.colwise().sum().transpose();
        direction = "in";
        break;
    }
  }
  if (opts.normalized) score /= denom;

  ScoreVector sv =
      make_score_vector(net, "degree", std::move(score), opts.normalized);
  if (net.directed()) sv.params["direction"] = direction;
  annotate(sv, net, opts, false);
  return sv;
}

ScoreVector eigenvector_centrality(const Network& net,
                                   const CentralityOptions& opts) {
  Matrix A = symmetrized_adjacency(net);
  if (!opts.weighted) A = binarized(A);
  numerics::EigenResult r = numerics::dominant_eigenpair(A, opts.solve);

  ScoreVector sv =
      make_score_vector(net, "eigenvector", std::move(r.eigenvector), true);
  sv.params["eigenvalue"] = format_param(r.eigenvalue);
  annotate(sv, net, opts, true);
  return sv;
}

ScoreVector closeness_centrality(const Network& net,
                                 const CentralityOptions& opts) {
  const numerics::Geodesics g = numerics::all_pairs_geodesics(net, opts.weighted);
  const Index n = net.size();
  const double inf = std::numeric_limits<double>::infinity();

  Vector score = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    double sum = 0.0;
    Index reached = 0;
    for (Index j = 0; j < n; ++j) {
      if (j == i || g.dist(i, j) == inf) continue;
      sum += g.dist(i, j);
      ++reached;
    }
    if (!opts.per_component && reached < n - 1) {
      fail(ErrorCode::DisconnectedGraph,
           "closeness needs every node reachable; use per_component");
    }
    if (reached == 0) continue;
    score(i) = (opts.normalized ? static_cast<double>(reached) : 1.0) / sum;
  }

  ScoreVector sv =
      make_score_vector(net, "closeness", std::move(score), opts.normalized);
  if (opts.per_component) sv.params["per_component"] = "true";
  annotate(sv, net, opts, false);
  return sv;
}

ScoreVector betweenness_centrality(const Network& net,
                                   const CentralityOptions& opts) {
  const numerics::Geodesics g = numerics::all_pairs_geodesics(net, opts.weighted);
  const Index n = net.size();
  const bool directed = net.directed();

  Vector score = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    for (Index k = directed ? 0 : j + 1; k < n; ++k) {
      if (k == j || g.counts(j, k) == 0.0) continue;
      for (Index i = 0; i < n; ++i) {
        if (i == j || i == k || !on_geodesic(g, j, i, k)) continue;
        score(i) += g.counts(j, i) * g.counts(i, k) / g.counts(j, k);
      }
    }
  }
  if (opts.normalized && n > 2) {
    const double pairs =
        static_cast<double>(n - 1) * static_cast<double>(n - 2);
    score /= directed ? pairs : pairs / 2.0;
  }

  ScoreVector sv =
      make_score_vector(net, "betweenness", std::move(score), opts.normalized);
  annotate(sv, net, opts, false);
  return sv;
}

ScoreVector flow_betweenness(const Network& net,
                             const CentralityOptions& opts) {
  numerics::check(opts.solve);
  std::optional<Network> storage;
  const Network& view = measured_view(net, opts.weighted, storage);
  const Index n = view.size();
  const bool directed = view.directed();

  Vector through = Vector::Zero(n);
  Vector total = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    for (Index k = directed ? 0 : j + 1; k < n; ++k) {
      if (k == j) continue;
      const numerics::MaxFlow f = numerics::max_flow(view, j, k);
      if (f.value <= 0.0) continue;
      for (Index i = 0; i < n; ++i) {
        if (i == j || i == k) continue;
        through(i) += f.throughflow(i);
        total(i) += f.value;
      }
    }
  }

  Vector score = through;
  if (opts.normalized) {
    for (Index i = 0; i < n; ++i) {
      score(i) = total(i) > 0.0 ? through(i) / total(i) : 0.0;
    }
  }

  ScoreVector sv = make_score_vector(net, "flow_betweenness", std::move(score),
                                     opts.normalized);
  annotate(sv, net, opts, false);
  return sv;
}

ScoreVector walk_betweenness(const Network& net,
                             const CentralityOptions& opts) {
  std::optional<Network> storage;
  const Network& view = measured_view(net, opts.weighted, storage);
  const Index n = view.size();

  Vector score = Vector::Zero(n);
  if (n > 1) {
    const Matrix S = symmetrized_adjacency(view);
    const Matrix G = numerics::grounded_laplacian_inverse(view, n - 1);
    for (Index j = 0; j < n; ++j) {
      for (Index k = j + 1; k < n; ++k) {
        for (Index i = 0; i < n; ++i) {
          if (i == j || i == k) continue;
          double current = 0.0;
          for (Index u = 0; u < n; ++u) {
            if (S(i, u) <= 0.0) continue;
            current +=
                S(i, u) * std::abs(G(i, j) - G(i, k) - G(u, j) + G(u, k));
          }
          score(i) += 0.5 * current;
        }
      }
    }
  }
  if (opts.normalized && n > 2) {
    score /= static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
  }

  ScoreVector sv = make_score_vector(net, "walk_betweenness", std::move(score),
                                     opts.normalized);
  annotate(sv, net, opts, true);
  return sv;
}

ScoreVector information_centrality(const Network& net,
                                   const CentralityOptions& opts) {
  const Index n = net.size();
  if (n == 1) {
    fail(ErrorCode::SingletonNetwork,
         "information centrality needs at least two nodes");
  }
  std::optional<Network> storage;
  const Network& view = measured_view(net, opts.weighted, storage);
  if (component_count(connected_components(view)) > 1) {
    fail(ErrorCode::DisconnectedGraph,
         "information centrality needs a connected network");
  }

  const Matrix S = symmetrized_adjacency(view);
  Matrix X = Matrix::Ones(n, n) - S;
  X.diagonal() = Vector::Ones(n) + S.rowwise().sum();
  const Matrix B = numerics::solve_linear(X, Matrix::Identity(n, n), opts.solve);

  const double trace = B.trace();
  const Vector rowsum = B.rowwise().sum();
  Vector score(n);
  for (Index i = 0; i < n; ++i) {
    score(i) =
        static_cast<double>(n) /
        (static_cast<double>(n) * B(i, i) + trace - 2.0 * rowsum(i));
  }
  if (opts.normalized) score /= score.sum();

  ScoreVector sv = make_score_vector(net, "information", std::move(score),
                                     opts.normalized);
  annotate(sv, net, opts, true);
  return sv;
}

ScoreVector eccentricity_centrality(const Network& net,
                                    const CentralityOptions& opts) {
  const numerics::Geodesics g = numerics::all_pairs_geodesics(net, opts.weighted);
  const Index n = net.size();
  const double inf = std::numeric_limits<double>::infinity();

  Vector score = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    double ecc = 0.0;
    Index reached = 0;
    for (Index j = 0; j < n; ++j) {
      if (j == i || g.dist(i, j) == inf) continue;
      ecc = std::max(ecc, g.dist(i, j));
      ++reached;
    }
    if (!opts.per_component && reached < n - 1) {
      fail(ErrorCode::DisconnectedGraph,
           "eccentricity needs every node reachable; use per_component");
    }
    if (reached == 0) continue;
    score(i) = 1.0 / ecc;
  }

  ScoreVector sv = make_score_vector(net, "eccentricity", std::move(score),
                                     opts.normalized);
  if (opts.per_component) sv.params["per_component"] = "true";
  annotate(sv, net, opts, false);
  return sv;
}

}  // namespace netpower
