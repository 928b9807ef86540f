#include "dextra/weights.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dextra {

bool is_column_stochastic(const Matrix& A, double tol) {
  if (A.rows() != A.cols()) return false;
  if ((A.array() < -tol).any()) return false;
  for (int j = 0; j < A.cols(); ++j)
    if (std::abs(A.col(j).sum() - 1.0) > tol) return false;
  return true;
}

Matrix local_degree_weights(const Digraph& g) {
  const int n = g.size();
  Matrix A = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const double w = 1.0 / g.out_degree(j);
    for (int i : g.out_neighbors(j)) A(i, j) = w;
  }
  return A;
}

Matrix constant_weights(const Digraph& g, double zeta) {
  const int n = g.size();
  const int excess = g.max_out_degree() - 1;
  if (zeta <= 0.0 || (excess > 0 && zeta >= 1.0 / excess) ||
      (excess == 0 && zeta >= 1.0))
    throw std::invalid_argument(
        "zeta must lie in (0, 1/(max out-degree - 1)); got " +
        std::to_string(zeta));
  Matrix A = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i : g.out_neighbors(j))
      A(i, j) = (i == j) ? 1.0 - zeta * (g.out_degree(j) - 1) : zeta;
  }
  return A;
}

WeightPair make_tilde(const Matrix& A, double theta) {
  if (theta <= 0.0 || theta > 0.5)
    throw std::invalid_argument("theta must lie in (0, 1/2]; got " +
                                std::to_string(theta));
  if (!is_column_stochastic(A, 1e-10))
    throw std::invalid_argument("weight matrix is not column-stochastic");
  WeightPair pair;
  pair.A = A;
  pair.A_tilde = theta * Matrix::Identity(A.rows(), A.cols()) + (1.0 - theta) * A;
  pair.theta = theta;
  return pair;
}

StationaryInfo stationary(const Matrix& A, double tol, int max_iter) {
  const int n = static_cast<int>(A.rows());
  Vector y = Vector::Ones(n);
  bool converged = false;
  for (int k = 0; k < max_iter; ++k) {
    Vector next = A * y;
    if ((next - y).lpNorm<Eigen::Infinity>() <= tol) {
      y = next;
      converged = true;
      break;
    }
    y = next;
  }
  if (!converged)
    throw std::runtime_error(
        "stationary vector iteration did not converge; the matrix is likely "
        "periodic or not strongly connected");
  StationaryInfo info;
  info.pi = y * (static_cast<double>(n) / y.sum());
  if (info.pi.minCoeff() <= 0.0)
    throw std::runtime_error("stationary vector has a non-positive entry");
  info.gamma = 1.0 - std::pow(static_cast<double>(n), -static_cast<double>(n));
  info.big_c = 4.0;
  return info;
}

PositivityCheck check_scaled_positivity(const WeightPair& pair,
                                        const StationaryInfo& info) {
  const Matrix d_inv = info.pi.cwiseInverse().asDiagonal();
  const Matrix sym = d_inv * pair.A_tilde + pair.A_tilde.transpose() * d_inv;
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  PositivityCheck out;
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.max_eigenvalue = es.eigenvalues().maxCoeff();
  out.positive = out.min_eigenvalue > 1e-12 * out.max_eigenvalue;
  return out;
}

bool check_consensus_rate_bound(const Matrix& A, const StationaryInfo& info,
                                int horizon) {
  const int n = static_cast<int>(A.rows());
  const Vector pi_stochastic = info.pi / static_cast<double>(n);
  Matrix power = Matrix::Identity(n, n);
  double bound = info.big_c;  // C * gamma^0
  for (int k = 0; k <= horizon; ++k) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (std::abs(power(i, j) - pi_stochastic(i)) >= bound + 1e-15)
          return false;
    power = A * power;
    bound *= info.gamma;
  }
  return true;
}

}  // namespace dextra
