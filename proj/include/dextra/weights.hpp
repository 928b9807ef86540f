#pragma once

#include "dextra/digraph.hpp"
#include "dextra/linalg.hpp"

namespace dextra {

/// Column-stochastic mixing matrix A together with its damped companion
/// A_tilde = theta*I + (1-theta)*A. Both share the sparsity pattern of the
/// graph (A_tilde additionally always has a positive diagonal).
struct WeightPair {
  Matrix A;
  Matrix A_tilde;
  double theta = 0.5;
};

/// Stationary data of a column-stochastic matrix: pi is the right
/// eigenvector at eigenvalue 1, normalized so its entries sum to n. With
/// that normalization diag(pi) is the limit of diag(A^k * 1). gamma and
/// big_c are the universal per-entry mixing-rate constants C * gamma^k used
/// by the consensus bound check (gamma = 1 - n^-n, C = 4).
struct StationaryInfo {
  Vector pi;
  double gamma = 0.0;
  double big_c = 4.0;

  double min_pi() const { return pi.minCoeff(); }
  double max_pi() const { return pi.maxCoeff(); }
};

bool is_column_stochastic(const Matrix& A, double tol = 1e-12);

/// a_ij = 1 / out_degree(j) for every receiver i of j, zero otherwise.
Matrix local_degree_weights(const Digraph& g);

/// Diagonally dominant construction: a_jj = 1 - zeta*(out_degree(j) - 1) and
/// a_ij = zeta for the other receivers. Requires
/// 0 < zeta < 1 / max_j(out_degree(j) - 1) so the diagonal stays positive.
Matrix constant_weights(const Digraph& g, double zeta);

/// Pairs A with A_tilde = theta*I + (1-theta)*A. theta must lie in (0, 1/2].
WeightPair make_tilde(const Matrix& A, double theta);

/// Stationary vector by power iteration y <- A*y from y = 1 (the same
/// dynamics the y-sequence of the optimizer follows). Fails loudly when the
/// iteration does not reach ||A*y - y||_inf <= tol within max_iter, which
/// signals a violated precondition (e.g. a periodic or disconnected matrix).
StationaryInfo stationary(const Matrix& A, double tol = 1e-13,
                          int max_iter = 200000);

struct PositivityCheck {
  bool positive = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// Smallest eigenvalue of diag(pi)^-1 * A_tilde + A_tilde^T * diag(pi)^-1,
/// the symmetric matrix whose positive definiteness the step-size
/// certification requires. "positive" uses a 1e-12 tolerance relative to the
/// largest eigenvalue.
PositivityCheck check_scaled_positivity(const WeightPair& pair,
                                        const StationaryInfo& info);

/// Verifies the per-entry mixing bound |[A^k]_ij - pi_i| < C * gamma^k for
/// all k <= horizon, with pi renormalized to a stochastic vector (sum 1).
/// A 1e-15 absolute slack absorbs floating-point noise in the degenerate
/// cases where both sides vanish.
bool check_consensus_rate_bound(const Matrix& A, const StationaryInfo& info,
                                int horizon);

}  // namespace dextra
