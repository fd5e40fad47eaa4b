#pragma once

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "netpower/error.hpp"
#include "netpower/graph.hpp"
#include "netpower/types.hpp"

namespace netpower::numerics {

struct SolveOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
};

/// A pivot magnitude below this during LU factorization raises SingularMatrix.
inline constexpr double kPivotFloor = 1e-14;

inline void check(const SolveOptions& opts) {
  if (!(opts.tolerance > 0.0)) {
    fail(ErrorCode::BadParameter, "tolerance must be positive");
  }
  if (opts.max_iterations < 1) {
    fail(ErrorCode::BadParameter, "max_iterations must be at least 1");
  }
}

/// Direct dense solve by LU with partial pivoting, followed by iterative
/// refinement until ||M X - B||_inf <= tolerance * (1 + ||B||_inf). Accepts
/// matrix or vector expressions on the right-hand side and returns the
/// matching shape.
template <class DerivedM, class DerivedB>
Eigen::Matrix<typename DerivedM::Scalar, Eigen::Dynamic,
              DerivedB::ColsAtCompileTime>
solve_linear(const Eigen::MatrixBase<DerivedM>& M_expr,
             const Eigen::MatrixBase<DerivedB>& B_expr, SolveOptions opts = {}) {
  using Scalar = typename DerivedM::Scalar;
  using Result =
      Eigen::Matrix<Scalar, Eigen::Dynamic, DerivedB::ColsAtCompileTime>;
  check(opts);
  MatrixX<Scalar> M = M_expr;
  Result B = B_expr;
  if (M.rows() != M.cols()) {
    fail(ErrorCode::BadParameter, "solve_linear needs a square matrix");
  }
  if (B.rows() != M.rows()) {
    fail(ErrorCode::BadParameter, "right-hand side does not match matrix size");
  }
  Eigen::PartialPivLU<MatrixX<Scalar>> lu(M);
  const MatrixX<Scalar>& packed = lu.matrixLU();
  for (Index i = 0; i < M.rows(); ++i) {
    if (std::abs(packed(i, i)) < kPivotFloor) {
      fail(ErrorCode::SingularMatrix, "pivot below 1e-14 during factorization");
    }
  }
  Result X = lu.solve(B);
  const double bound =
      opts.tolerance *
      (1.0 + static_cast<double>(B.template lpNorm<Eigen::Infinity>()));
  for (int step = 0; step < 4; ++step) {
    Result R = B - M * X;
    if (static_cast<double>(R.template lpNorm<Eigen::Infinity>()) <= bound) break;
    X += lu.solve(R);
  }
  return X;
}

struct EigenResult {
  double eigenvalue = 0.0;
  /// Nonnegative, unit 1-norm.
  Vector eigenvector;
};

/// Dominant eigenpair of a nonnegative matrix by power iteration on the
/// shifted matrix M + ||M||_inf I (the shift separates the dominant root on
/// periodic structures and never changes eigenvectors). The start vector is
/// uniform with extra mass on the lowest node index, which decides the limit
/// deterministically when the dominant eigenvalue is shared by several
/// disconnected blocks. Stops once ||M x - lambda x||_inf <= tolerance *
/// ||M||_inf.
EigenResult dominant_eigenpair(const Matrix& M, SolveOptions opts = {});

/// Spectral radius of a nonnegative matrix, computed blockwise over strongly
/// connected components so that reducible (e.g. nilpotent) matrices converge.
double spectral_radius(const Matrix& M, SolveOptions opts = {});

struct Geodesics {
  /// dist(i,j): shortest-path distance, +infinity when unreachable.
  Matrix dist;
  /// counts(i,j): number of distinct shortest paths, 0 when unreachable.
  Matrix counts;
};

/// All-pairs shortest paths with path counts. Unweighted mode runs BFS per
/// source; weighted mode runs Dijkstra with edge weights as lengths and a
/// 1e-12 relative tie tolerance. Zero-length edges never extend a geodesic
/// count (degenerate ties are excluded).
Geodesics all_pairs_geodesics(const Network& net, bool weighted = false);

struct MaxFlow {
  double value = 0.0;
  /// Net nonnegative flow per ordered node pair.
  Matrix flow;
  /// Flow routed through each node: inflow for intermediates, the flow value
  /// at the two endpoints.
  Vector throughflow;
};

/// Maximum s-t flow on edge capacities (both directions of an undirected
/// edge carry the full capacity), via shortest augmenting paths.
MaxFlow max_flow(const Network& net, Index source, Index sink);

/// Inverse of the Laplacian of the symmetrized network with the grounded
/// row and column deleted, re-embedded with zeros at the grounded index.
/// Requires a connected network.
Matrix grounded_laplacian_inverse(const Network& net, Index ground);

}  // namespace netpower::numerics
