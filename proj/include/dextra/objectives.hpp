#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "dextra/linalg.hpp"

namespace dextra {

/// A collection of per-agent differentiable objectives f_i: R^p -> R with
/// known smoothness and (restricted) strong-convexity constants. Instances
/// are immutable; gradient evaluation is pure and reentrant.
class ObjectiveSuite {
 public:
  virtual ~ObjectiveSuite() = default;

  virtual int agents() const = 0;
  virtual int dim() const = 0;
  virtual double value(int agent, const Vector& x) const = 0;
  virtual Vector gradient(int agent, const Vector& x) const = 0;
  /// Gradient Lipschitz constant of f_i.
  virtual double lipschitz(int agent) const = 0;
  /// Restricted strong-convexity constant of f_i (w.r.t. the optimum).
  virtual double strong_convexity(int agent) const = 0;

  /// Rows of the result are the per-agent gradients evaluated at the
  /// matching rows of z (z is agents x dim).
  Matrix stacked_gradient(const Matrix& z) const;
};

/// (L_f, S_f) aggregates: max over agents of the Lipschitz constants and min
/// over agents of the strong-convexity constants.
std::pair<double, double> estimate_constants(const ObjectiveSuite& suite);

/// Least squares family: f_i(x) = ||H_i x - h_i||^2 with
/// grad f_i(x) = 2 H_i^T (H_i x - h_i), so L_i = 2 lambda_max(H_i^T H_i) and
/// S_i = 2 lambda_min(H_i^T H_i), both computed exactly at construction.
class LeastSquaresInstance final : public ObjectiveSuite {
 public:
  LeastSquaresInstance(std::vector<Matrix> H, std::vector<Vector> h,
                       Vector x_true);

  int agents() const override { return static_cast<int>(H_.size()); }
  int dim() const override { return static_cast<int>(x_true_.size()); }
  double value(int agent, const Vector& x) const override;
  Vector gradient(int agent, const Vector& x) const override;
  double lipschitz(int agent) const override { return lipschitz_[agent]; }
  double strong_convexity(int agent) const override { return strong_[agent]; }

  const Matrix& data_matrix(int agent) const { return H_[agent]; }
  const Vector& data_vector(int agent) const { return h_[agent]; }
  /// The vector the data was generated from. Diagnostic only: with noise the
  /// minimizer of the summed objective differs from it.
  const Vector& x_true() const { return x_true_; }

  bool operator==(const LeastSquaresInstance& other) const;

 private:
  std::vector<Matrix> H_;
  std::vector<Vector> h_;
  Vector x_true_;
  std::vector<double> lipschitz_;
  std::vector<double> strong_;
};

struct LeastSquaresParams {
  int n = 10;
  int p = 4;
  int m_each = 6;
  double noise_std = 0.1;
  std::uint64_t seed = 0;
  /// All H_i are rescaled by a common factor so that
  /// max_i 2 lambda_max(H_i^T H_i) equals this target.
  double target_lipschitz = 0.14;
};

/// H_i entries i.i.d. standard normal (deterministic per seed), rescaled to
/// the Lipschitz target; h_i = H_i x_true + noise. Regenerates internally
/// (perturbed seed) when a block comes out rank deficient; fails after 10
/// attempts.
LeastSquaresInstance generate_least_squares(const LeastSquaresParams& params);
LeastSquaresInstance generate_least_squares(int n, int p, int m_each,
                                            double noise_std,
                                            std::uint64_t seed);

/// Unique minimizer of sum_i f_i via the normal equations. Throws when the
/// aggregated Gram matrix is singular; the returned point has aggregated
/// gradient norm <= 1e-10 * (1 + ||u||).
Vector centralized_solve(const LeastSquaresInstance& inst);

/// Directory layout: manifest.txt plus per-agent H_<i>.csv / h_<i>.csv and
/// x_true.csv. Values round-trip exactly.
void save_instance(const LeastSquaresInstance& inst,
                   const std::filesystem::path& dir,
                   const LeastSquaresParams* provenance = nullptr);
LeastSquaresInstance load_instance(const std::filesystem::path& dir);

}  // namespace dextra
