#include "netpower/numerics.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

namespace netpower::numerics {

namespace {

constexpr double kTieEps = 1e-12;

void require_nonnegative(const Matrix& M, const char* where) {
  if (M.rows() != M.cols()) {
    fail(ErrorCode::BadParameter, std::string(where) + " needs a square matrix");
  }
  if (!M.allFinite() || (M.array() < 0.0).any()) {
    fail(ErrorCode::BadParameter,
         std::string(where) + " needs finite nonnegative entries");
  }
}

/// Strongly connected components of the nonzero pattern (iterative Tarjan).
std::vector<int> pattern_components(const Matrix& M) {
  const Index n = M.rows();
  std::vector<int> index(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0),
      comp(static_cast<size_t>(n), -1);
  std::vector<bool> on_stack(static_cast<size_t>(n), false);
  std::vector<Index> stack;
  int next_index = 0, next_comp = 0;
  struct Frame { Index v; Index e; };
  for (Index root = 0; root < n; ++root) {
    if (index[static_cast<size_t>(root)] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = next_index++;
    stack.push_back(root);
    on_stack[static_cast<size_t>(root)] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.e < n) {
        Index w = f.e++;
        if (M(f.v, w) == 0.0) continue;
        if (index[static_cast<size_t>(w)] == -1) {
          index[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = next_index++;
          stack.push_back(w);
          on_stack[static_cast<size_t>(w)] = true;
          frames.push_back({w, 0});
        } else if (on_stack[static_cast<size_t>(w)]) {
          low[static_cast<size_t>(f.v)] =
              std::min(low[static_cast<size_t>(f.v)], index[static_cast<size_t>(w)]);
        }
      } else {
        Index v = f.v;
        frames.pop_back();
        if (!frames.empty()) {
          low[static_cast<size_t>(frames.back().v)] = std::min(
              low[static_cast<size_t>(frames.back().v)], low[static_cast<size_t>(v)]);
        }
        if (low[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
          while (true) {
            Index w = stack.back();
            stack.pop_back();
            on_stack[static_cast<size_t>(w)] = false;
            comp[static_cast<size_t>(w)] = next_comp;
            if (w == v) break;
          }
          ++next_comp;
        }
      }
    }
  }
  return comp;
}

}  // namespace

EigenResult dominant_eigenpair(const Matrix& M, SolveOptions opts) {
  check(opts);
  require_nonnegative(M, "dominant_eigenpair");
  const Index n = M.rows();
  const double norm = M.rowwise().sum().maxCoeff();
  if (norm <= 0.0) fail(ErrorCode::ZeroMatrix, "matrix has no nonzero entries");
  const double sigma = norm;
  const double bound = opts.tolerance * norm;

  Vector x = Vector::Constant(n, 1e-9);
  x[0] += 1.0;
  x /= x.sum();
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    Vector y = M * x + sigma * x;
    const double mu = y.sum();
    // ||y - mu x|| equals the unshifted residual ||M x - (mu - sigma) x||.
    const double resid = (y - mu * x).lpNorm<Eigen::Infinity>();
    if (resid <= bound) return {mu - sigma, x};
    x = y / mu;
  }
  fail(ErrorCode::NoConvergence,
       "power iteration did not meet the residual bound in " +
           std::to_string(opts.max_iterations) + " iterations");
}

double spectral_radius(const Matrix& M, SolveOptions opts) {
  require_nonnegative(M, "spectral_radius");
  const Index n = M.rows();
  if (n == 0) return 0.0;
  if (M.maxCoeff() == 0.0) return 0.0;

  std::vector<int> comp = pattern_components(M);
  int count = 0;
  for (int c : comp) count = std::max(count, c + 1);
  std::vector<std::vector<Index>> members(static_cast<size_t>(count));
  for (Index i = 0; i < n; ++i) members[static_cast<size_t>(comp[static_cast<size_t>(i)])].push_back(i);

  double rho = 0.0;
  for (const auto& block : members) {
    if (block.size() == 1) {
      Index i = block[0];
      rho = std::max(rho, M(i, i));
      continue;
    }
    const Index m = static_cast<Index>(block.size());
    Matrix B(m, m);
    for (Index a = 0; a < m; ++a) {
      for (Index b = 0; b < m; ++b) {
        B(a, b) = M(block[static_cast<size_t>(a)], block[static_cast<size_t>(b)]);
      }
    }
    rho = std::max(rho, dominant_eigenpair(B, opts).eigenvalue);
  }
  return rho;
}

Geodesics all_pairs_geodesics(const Network& net, bool weighted) {
  const Index n = net.size();
  const double inf = std::numeric_limits<double>::infinity();
  Geodesics g;
  g.dist = Matrix::Constant(n, n, inf);
  g.counts = Matrix::Zero(n, n);

  std::vector<double> dist(static_cast<size_t>(n));
  std::vector<Index> order;
  order.reserve(static_cast<size_t>(n));

  for (Index s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), inf);
    dist[static_cast<size_t>(s)] = 0.0;

    if (!weighted) {
      std::queue<Index> q;
      q.push(s);
      while (!q.empty()) {
        Index u = q.front();
        q.pop();
        for (const Shareholding& h : net.out_edges(u)) {
          if (dist[static_cast<size_t>(h.owner)] == inf) {
            dist[static_cast<size_t>(h.owner)] = dist[static_cast<size_t>(u)] + 1.0;
            q.push(h.owner);
          }
        }
      }
    } else {
      using Item = std::pair<double, Index>;
      std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
      pq.push({0.0, s});
      while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[static_cast<size_t>(u)] + kTieEps) continue;
        for (const Shareholding& h : net.out_edges(u)) {
          if (h.weight < 0.0) {
            fail(ErrorCode::NegativeEdgeLength, "negative edge length");
          }
          double nd = d + h.weight;
          if (nd < dist[static_cast<size_t>(h.owner)] - kTieEps) {
            dist[static_cast<size_t>(h.owner)] = nd;
            pq.push({nd, h.owner});
          }
        }
      }
    }

    order.clear();
    for (Index v = 0; v < n; ++v) {
      if (dist[static_cast<size_t>(v)] < inf) order.push_back(v);
    }
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      double da = dist[static_cast<size_t>(a)], db = dist[static_cast<size_t>(b)];
      return da != db ? da < db : a < b;
    });

    g.counts(s, s) = 1.0;
    for (Index v : order) {
      const double dv = dist[static_cast<size_t>(v)];
      g.dist(s, v) = dv;
      if (g.counts(s, v) == 0.0) continue;
      for (const Shareholding& h : net.out_edges(v)) {
        const double w = weighted ? h.weight : 1.0;
        if (w <= kTieEps) continue;
        const double du = dist[static_cast<size_t>(h.owner)];
        if (du == inf) continue;
        if (std::abs(dv + w - du) <= kTieEps * std::max(1.0, std::abs(du))) {
          g.counts(s, h.owner) += g.counts(s, v);
        }
      }
    }
  }
  return g;
}

MaxFlow max_flow(const Network& net, Index source, Index sink) {
  const Index n = net.size();
  if (source < 0 || source >= n || sink < 0 || sink >= n || source == sink) {
    fail(ErrorCode::BadParameter, "max_flow needs two distinct nodes");
  }
  const Matrix& cap = net.adjacency();
  const double eps = 1e-12;
  Matrix f = Matrix::Zero(n, n);
  double value = 0.0;

  std::vector<Index> parent(static_cast<size_t>(n));
  while (true) {
    std::fill(parent.begin(), parent.end(), static_cast<Index>(-1));
    parent[static_cast<size_t>(source)] = source;
    std::queue<Index> q;
    q.push(source);
    while (!q.empty() && parent[static_cast<size_t>(sink)] == -1) {
      Index u = q.front();
      q.pop();
      for (Index v = 0; v < n; ++v) {
        if (parent[static_cast<size_t>(v)] == -1 && cap(u, v) - f(u, v) > eps) {
          parent[static_cast<size_t>(v)] = u;
          q.push(v);
        }
      }
    }
    if (parent[static_cast<size_t>(sink)] == -1) break;

    double bottleneck = std::numeric_limits<double>::infinity();
    for (Index v = sink; v != source; v = parent[static_cast<size_t>(v)]) {
      Index u = parent[static_cast<size_t>(v)];
      bottleneck = std::min(bottleneck, cap(u, v) - f(u, v));
    }
    for (Index v = sink; v != source; v = parent[static_cast<size_t>(v)]) {
      Index u = parent[static_cast<size_t>(v)];
      f(u, v) += bottleneck;
      f(v, u) -= bottleneck;
    }
    value += bottleneck;
  }

  MaxFlow out;
  out.value = value;
  out.flow = f.cwiseMax(0.0);
  out.throughflow = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    out.throughflow[i] =
        (i == source || i == sink) ? value : out.flow.col(i).sum();
  }
  return out;
}

Matrix grounded_laplacian_inverse(const Network& net, Index ground) {
  const Index n = net.size();
  if (ground < 0 || ground >= n) {
    fail(ErrorCode::BadParameter, "ground index out of range");
  }
  if (component_count(connected_components(net)) > 1) {
    fail(ErrorCode::DisconnectedGraph,
         "grounded Laplacian needs a connected network");
  }
  Matrix S = symmetrized_adjacency(net);
  Matrix L = Matrix(S.rowwise().sum().asDiagonal()) - S;

  Matrix reduced(n - 1, n - 1);
  for (Index i = 0, ri = 0; i < n; ++i) {
    if (i == ground) continue;
    for (Index j = 0, rj = 0; j < n; ++j) {
      if (j == ground) continue;
      reduced(ri, rj) = L(i, j);
      ++rj;
    }
    ++ri;
  }
  Matrix identity = Matrix::Identity(n - 1, n - 1);
  Matrix inv = solve_linear(reduced, identity);

  Matrix out = Matrix::Zero(n, n);
  for (Index i = 0, ri = 0; i < n; ++i) {
    if (i == ground) continue;
    for (Index j = 0, rj = 0; j < n; ++j) {
      if (j == ground) continue;
      out(i, j) = inv(ri, rj);
      ++rj;
    }
    ++ri;
  }
  return out;
}

}  // namespace netpower::numerics
