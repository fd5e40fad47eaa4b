#include "netpower/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "netpower/error.hpp"

namespace netpower {

namespace {

constexpr double kDivergenceMargin = 1e-9;
constexpr double kPagerankResidual = 1e-10;

std::string format_param(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Vector node_values(const Network& net) {
  Vector v(net.size());
  for (Index i = 0; i < net.size(); ++i) v(i) = net.node(i).value;
  return v;
}

bool is_acyclic(const Network& net) {
  const std::vector<int> comp = strongly_connected_components(net);
  std::vector<int> seen;
  for (int c : comp) {
    if (static_cast<size_t>(c) >= seen.size()) seen.resize(size_t(c) + 1, 0);
    if (seen[size_t(c)]++) return false;
  }
  return true;
}

/// Terminating walk sum C v + C^2 v + ... for nilpotent stake matrices.
Vector walk_sum(const Matrix& C, const Vector& v) {
  Vector term = C * v;
  Vector acc = term;
  for (Index l = 2; l <= C.rows(); ++l) {
    term = C * term;
    acc += term;
  }
  return acc;
}

void require_convergent(const Matrix& C, const numerics::SolveOptions& solve) {
  if (C.size() == 0 || C.maxCoeff() <= 0.0) return;
  // Column sums bound the spectral radius; only near-saturated holdings need
  // the eigenvalue itself.
  if (C.colwise().sum().maxCoeff() < 1.0 - kDivergenceMargin) return;
  const double rho = numerics::spectral_radius(C, solve);
  if (rho >= 1.0 - kDivergenceMargin) {
    throw Error(ErrorCode::DivergentPropagation,
                "stake matrix spectral radius " + format_param(rho) +
                    " leaves no value to distribute");
  }
}

Vector control_value(const Network& net, const PropagationOptions& opts) {
  if (!net.ownership()) {
    throw Error(ErrorCode::BadParameter,
                "control value requires an ownership network");
  }
  const Matrix& C = net.adjacency();
  const Vector v = node_values(net);
  if (is_acyclic(net)) return walk_sum(C, v);
  require_convergent(C, opts.solve);
  Matrix system = Matrix::Identity(net.size(), net.size()) - C;
  Vector rhs = C * v;
  return numerics::solve_linear(system, rhs, opts.solve);
}

Network strip_intra_component_edges(const Network& net) {
  const std::vector<int> comp = strongly_connected_components(net);
  std::vector<NodeRecord> nodes;
  for (Index i = 0; i < net.size(); ++i) nodes.push_back(net.node(i));
  std::vector<Edge> edges;
  for (Index i = 0; i < net.size(); ++i) {
    for (const Shareholding& h : net.out_edges(i)) {
      if (comp[size_t(i)] == comp[size_t(h.owner)]) continue;
      edges.push_back({net.node(i).id, net.node(h.owner).id, h.weight});
    }
  }
  return Network::build(nodes, edges, {true, true});
}

double default_attenuation(const Matrix& A, const numerics::SolveOptions& solve) {
  if (A.size() == 0 || A.maxCoeff() <= 0.0) return 1.0;
  const double rho = numerics::spectral_radius(A, solve);
  return rho > 0.0 ? 0.9 / rho : 1.0;
}

}  // namespace

ScoreVector ncv(const Network& net, const PropagationOptions& opts) {
  return make_score_vector(net, "ncv", control_value(net, opts), false);
}

ScoreVector nncv(const Network& net, const PropagationOptions& opts) {
  const Vector full = control_value(net, opts);
  Vector kept = full;
  if (!is_acyclic(net)) {
    kept = control_value(strip_intra_component_edges(net), opts);
  }
  ScoreVector sv = make_score_vector(net, "nncv", std::move(kept), false);
  sv.params["recycled_total"] = format_param(full.sum() - sv.scores.sum());
  return sv;
}

ScoreVector pagerank(const Network& net, const PropagationOptions& opts) {
  if (!net.directed()) {
    throw Error(ErrorCode::BadParameter, "pagerank requires a directed network");
  }
  if (!(opts.damping > 0.0) || !(opts.damping < 1.0)) {
    throw Error(ErrorCode::BadParameter, "damping must lie in (0, 1)");
  }
  numerics::check(opts.solve);
  const Index n = net.size();
  const double d = opts.damping;

  std::vector<double> out_degree(static_cast<size_t>(n), 0.0);
  for (Index i = 0; i < n; ++i) {
    out_degree[size_t(i)] = double(net.out_edges(i).size());
  }

  Vector score = Vector::Ones(n);
  int iterations = 0;
  for (int iter = 1; iter <= opts.solve.max_iterations; ++iter) {
    double dangling = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (out_degree[size_t(j)] == 0.0) dangling += score(j);
    }
    Vector next = Vector::Constant(n, (1.0 - d) + d * dangling / double(n));
    for (Index j = 0; j < n; ++j) {
      if (out_degree[size_t(j)] == 0.0) continue;
      const double push = d * score(j) / out_degree[size_t(j)];
      for (const Shareholding& h : net.out_edges(j)) next(h.owner) += push;
    }
    const double delta = (next - score).lpNorm<Eigen::Infinity>();
    score = std::move(next);
    iterations = iter;
    if (delta <= kPagerankResidual) {
      ScoreVector sv = make_score_vector(net, "pagerank", std::move(score), false);
      sv.params["damping"] = format_param(d);
      sv.params["iterations"] = std::to_string(iterations);
      return sv;
    }
  }
  throw Error(ErrorCode::NoConvergence,
              "pagerank did not reach residual " +
                  format_param(kPagerankResidual) + " in " +
                  std::to_string(opts.solve.max_iterations) + " iterations");
}

KatzResult katz_influence(const Network& net, const PropagationOptions& opts) {
  const Matrix& A = net.adjacency();
  const double alpha = opts.attenuation
                           ? *opts.attenuation
                           : default_attenuation(A, opts.solve);
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw Error(ErrorCode::BadParameter, "attenuation must be finite and >= 0");
  }

  KatzResult result;
  if (alpha == 0.0) {
    result.influence = A;
  } else if (A.maxCoeff() <= 0.0) {
    result.influence = A;
  } else {
    const double rho = numerics::spectral_radius(A, opts.solve);
    if (alpha * rho >= 1.0 - kDivergenceMargin) {
      throw Error(ErrorCode::AttenuationTooLarge,
                  "attenuation " + format_param(alpha) +
                      " times spectral radius " + format_param(rho) +
                      " reaches one; walk series diverges");
    }
    Matrix system = Matrix::Identity(net.size(), net.size()) - alpha * A;
    Matrix rhs = A;
    result.influence = numerics::solve_linear(system, rhs, opts.solve);
  }

  result.scores =
      make_score_vector(net, "katz_influence", result.influence.rowwise().sum(), false);
  result.scores.params["attenuation"] = format_param(alpha);
  return result;
}

std::map<std::string, FirmController> alpha_icon_controllers(
    const Network& net, const PropagationOptions& opts,
    double control_threshold) {
  if (!net.ownership()) {
    throw Error(ErrorCode::BadParameter,
                "controller readout requires an ownership network");
  }
  if (!(control_threshold > 0.0)) {
    throw Error(ErrorCode::BadParameter, "control threshold must be positive");
  }
  const KatzResult katz = katz_influence(net, opts);

  std::map<std::string, FirmController> controllers;
  for (Index j = 0; j < net.size(); ++j) {
    if (net.node(j).kind != NodeKind::Firm) continue;
    Index best = -1;
    for (Index i = 0; i < net.size(); ++i) {
      if (net.node(i).kind != NodeKind::Person) continue;
      const double stake = katz.influence(i, j);
      if (stake < control_threshold) continue;
      if (best < 0 || stake > katz.influence(best, j) ||
          (stake == katz.influence(best, j) &&
           net.node(i).id < net.node(best).id)) {
        best = i;
      }
    }
    if (best >= 0) {
      controllers[net.node(j).id] = {net.node(best).id, katz.influence(best, j)};
    }
  }
  return controllers;
}

}  // namespace netpower
