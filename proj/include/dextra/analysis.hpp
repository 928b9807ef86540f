#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dextra/engine.hpp"
#include "dextra/linalg.hpp"
#include "dextra/objectives.hpp"
#include "dextra/weights.hpp"

namespace dextra {

/// Working matrices of the step-size certification, all built from the
/// weight pair and the stationary diagonal Dinf = diag(pi):
///   M = Dinf^-1 A_tilde        N = Dinf^-1 (A_tilde - A)
///   Q = Dinf^-1 (I + A - 2 A_tilde)
///   P = I - A                  L = A_tilde - A     R = I + A - 2 A_tilde
/// The spectra the certificate needs are cached alongside.
struct MatrixSet {
  Matrix M, N, Q, P, L, R;
  double min_eig_M_sym = 0.0;       // lambda_min(M + M^T)
  double max_eig_M_sym = 0.0;       // lambda_max(M + M^T)
  double min_eig_N_sym = 0.0;       // lambda_min(N + N^T), >= 0 up to rounding
  double max_eig_N_sym = 0.0;
  double max_eig_NNt = 0.0;
  double max_eig_MMt = 0.0;
  double max_eig_RtR = 0.0;
  double max_eig_AtildeT_Atilde = 0.0;
  double norm_I_plus_A = 0.0;       // spectral norms
  double norm_A_tilde = 0.0;
  double lambda_tilde_min_LtL = 0.0;  // smallest nonzero eigenvalue of L^T L
  bool positivity_ok = false;         // M + M^T positive definite
};

MatrixSet build_matrix_set(const WeightPair& pair, const StationaryInfo& info);

enum class DMode { calibration, analytic };

/// Scale factors of the push-sum diagonal:
///   d       = sup_k max_i y_i^k
///   d_minus = sup_k 1 / min_i y_i^k
///   d_inf_minus = 1 / min_i pi_i.
/// Calibration mode reads the suprema off an exact finite run of the
/// y-iteration; analytic mode bounds d by n and floors min_i y_i^k by the
/// positive diagonal of A over the fitted mixing horizon.
struct DConstants {
  double d = 1.0;
  double d_minus = 1.0;
  double d_inf_minus = 1.0;
  DMode mode = DMode::calibration;
  int horizon = 0;
};

std::vector<Vector> y_calibration_trace(const Matrix& A, int horizon);
DConstants d_constants_from_trace(const std::vector<Vector>& ys,
                                  const StationaryInfo& info);
DConstants estimate_d_constants(const Matrix& A, const StationaryInfo& info,
                                int horizon, DMode mode);

/// Thrown when a certification parameter leaves its admissible range; names
/// the violated bound.
class ParameterBound : public std::invalid_argument {
 public:
  ParameterBound(const std::string& name, double value, double sup)
      : std::invalid_argument(name + " = " + std::to_string(value) +
                              " violates the bound (0, " +
                              std::to_string(sup) + ")"),
        parameter(name) {}
  std::string parameter;
};

double eta_upper_bound(const DConstants& dc, double lipschitz, double strong);
double delta_upper_bound(const MatrixSet& ms);

/// The scalar constants of the contraction certificate: growth coefficient
/// c1 (step-size dependent through alpha), the spectral ratio c2, the
/// geometric-tail coefficient c3, and the quadratic coefficients c4..c7 with
/// discriminant = c6^2 - 4 c4 delta (1/delta + c5 delta).
struct ContractionConstants {
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0, c7 = 0;
  double discriminant = 0;
  double eta = 0, delta = 0;
  double alpha_ref = 0;  // the step size c1 and c3 were evaluated at
};

ContractionConstants compute_constants(const MatrixSet& ms,
                                       const DConstants& dc, double lipschitz,
                                       double strong, double eta, double delta,
                                       double alpha);

struct StepSizeInterval {
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  bool feasible = false;
  std::string diagnostic;  // names the violated bound when infeasible
};

/// Exact interval from the certificate's quadratic: the set of alpha with
/// delta c4 alpha^2 - c6 alpha + (1/delta + c5 delta) <= 0, intersected with
/// alpha <= eta lambda_min(M+M^T) / (2 (d_inf_minus d_minus L_f)^2). Since c1
/// depends on alpha, the endpoints are resolved by a fixed-point pass
/// (tolerance 1e-10, at most 50 rounds). A negative discriminant is reported
/// as infeasible, not an error.
StepSizeInterval step_size_interval(const MatrixSet& ms, const DConstants& dc,
                                    double lipschitz, double strong,
                                    double eta, double delta);

/// Looser estimation procedure: keeps the eta-based upper endpoint and
/// bounds the lower endpoint by (S_f/(2 d^2) - eta/2) / (2 c2 delta),
/// clamped at zero. Unlike the exact quadratic this is computable without a
/// nonnegative discriminant; it is the interval practical runs are checked
/// against.
StepSizeInterval estimated_step_size_interval(const MatrixSet& ms,
                                              const DConstants& dc,
                                              double lipschitz, double strong,
                                              double eta, double delta);

struct CertifyOptions {
  double eta_fraction = 0.5;    // eta = fraction * its upper bound
  double delta_fraction = 0.5;  // delta = fraction * its upper bound
  int calibration_horizon = 500;
  double d_margin = 0.10;  // safety margin applied to d and d_minus
  DMode d_mode = DMode::calibration;
};

struct RateCertificate {
  int n = 0;
  double lipschitz = 0.0;
  double strong = 0.0;
  DConstants dc;
  double d_margin = 0.0;
  double eta = 0.0, eta_sup = 0.0;
  double delta = 0.0, delta_sup = 0.0;
  double min_eig_M_sym = 0.0;
  double gamma = 0.0;
  double big_c = 4.0;
  ContractionConstants constants;
  StepSizeInterval strict;     // exact quadratic interval
  StepSizeInterval estimated;  // estimation procedure
  bool positivity_ok = false;
  double positivity_min_eig = 0.0;

  /// The headline interval: the strict one when it is feasible, otherwise
  /// the estimated one.
  const StepSizeInterval& interval() const {
    return strict.feasible ? strict : estimated;
  }
  bool feasible() const { return positivity_ok && interval().feasible; }
  double recommended_alpha() const { return interval().alpha_hi; }
};

RateCertificate certify_step_size(const ObjectiveSuite& problem,
                                  const WeightPair& pair,
                                  const StationaryInfo& info,
                                  const CertifyOptions& options = {});

struct RateFit {
  double tau = 1.0;
  double slope = 0.0;
  double r_squared = 0.0;
  bool r2_defined = false;
};

/// Least-squares slope of log(series) against the iteration index, skipping
/// burn_in leading entries; tau = exp(slope). Throws on non-positive
/// entries, naming the offending index. A constant series yields tau = 1
/// with r2_defined = false.
RateFit fit_linear_rate(const std::vector<double>& series, int burn_in = 0);

/// Outcome of replaying a run through the contraction functional
///   s_k = ||D^k z^k - Dinf z*||^2_{M^T} + ||q^k - q*||^2_N,
/// where q^k accumulates the x-iterates and q* is the minimum-norm solution
/// of L q* = -alpha grad(z*) (consistent because the aggregated gradient
/// vanishes at the optimum). gamma_hat is the empirically fitted consensus
/// rate of ||diag(y^k) - diag(pi)||, reported because the universal
/// gamma = 1 - n^-n is too close to 1 to bind at practical horizons.
struct LyapunovReport {
  bool applicable = false;
  StopReason run_reason = StopReason::iteration_budget;
  std::vector<double> g_seminorm;
  std::vector<double> dz_error_sq;
  double min_seminorm = 0.0;
  bool seminorm_nonnegative = false;
  double gamma_universal = 0.0;
  double gamma_hat = 0.0;
  double big_gamma_hat = 0.0;  // smallest Gamma making the contraction
                               // inequality hold at every recorded k
  double delta = 0.0;
  RateFit dz_fit;
  std::optional<RateFit> seminorm_fit;
};

LyapunovReport lyapunov_validate(const ObjectiveSuite& problem,
                                 const WeightPair& pair,
                                 const StationaryInfo& info, const Vector& u,
                                 double alpha, double delta,
                                 const RunOptions& options);

}  // namespace dextra
