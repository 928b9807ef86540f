#include "dextra/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace dextra {

namespace {

double spectral_norm(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.transpose() * m);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double max_eig_sym(const Matrix& sym) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues().maxCoeff();
}

/// Smallest eigenvalue above the zero cluster of a PSD matrix.
double smallest_nonzero_eig(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const Vector ev = es.eigenvalues();
  const double tol =
      std::max(1.0, ev.cwiseAbs().maxCoeff()) * 1e-12 * ev.size();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > tol) return ev(i);
  return 0.0;
}

}  // namespace

MatrixSet build_matrix_set(const WeightPair& pair, const StationaryInfo& info) {
  const Eigen::Index n = pair.A.rows();
  const Matrix d_inv = info.pi.cwiseInverse().asDiagonal();
  const Matrix eye = Matrix::Identity(n, n);

  MatrixSet ms;
  ms.M = d_inv * pair.A_tilde;
  ms.N = d_inv * (pair.A_tilde - pair.A);
  ms.R = eye + pair.A - 2.0 * pair.A_tilde;
  ms.Q = d_inv * ms.R;
  ms.P = eye - pair.A;
  ms.L = pair.A_tilde - pair.A;

  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(ms.M + ms.M.transpose());
    ms.min_eig_M_sym = es.eigenvalues().minCoeff();
    ms.max_eig_M_sym = es.eigenvalues().maxCoeff();
  }
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(ms.N + ms.N.transpose());
    ms.min_eig_N_sym = es.eigenvalues().minCoeff();
    ms.max_eig_N_sym = es.eigenvalues().maxCoeff();
  }
  ms.max_eig_NNt = max_eig_sym(ms.N * ms.N.transpose());
  ms.max_eig_MMt = max_eig_sym(ms.M * ms.M.transpose());
  ms.max_eig_RtR = max_eig_sym(ms.R.transpose() * ms.R);
  ms.max_eig_AtildeT_Atilde =
      max_eig_sym(pair.A_tilde.transpose() * pair.A_tilde);
  ms.norm_I_plus_A = spectral_norm(eye + pair.A);
  ms.norm_A_tilde = spectral_norm(pair.A_tilde);
  ms.lambda_tilde_min_LtL = smallest_nonzero_eig(ms.L.transpose() * ms.L);
  ms.positivity_ok =
      ms.min_eig_M_sym > 1e-12 * std::max(1.0, ms.max_eig_M_sym);
  return ms;
}

std::vector<Vector> y_calibration_trace(const Matrix& A, int horizon) {
  std::vector<Vector> ys;
  ys.reserve(horizon + 1);
  Vector y = Vector::Ones(A.rows());
  ys.push_back(y);
  for (int k = 0; k < horizon; ++k) {
    y = A * y;
    ys.push_back(y);
  }
  return ys;
}

DConstants d_constants_from_trace(const std::vector<Vector>& ys,
                                  const StationaryInfo& info) {
  if (ys.empty()) throw std::invalid_argument("empty y trace");
  DConstants dc;
  dc.mode = DMode::calibration;
  dc.horizon = static_cast<int>(ys.size()) - 1;
  double max_entry = 0.0;
  double min_entry = std::numeric_limits<double>::infinity();
  for (const auto& y : ys) {
    max_entry = std::max(max_entry, y.maxCoeff());
    min_entry = std::min(min_entry, y.minCoeff());
  }
  if (min_entry <= 0.0)
    throw std::runtime_error("y trace lost positivity");
  dc.d = max_entry;           // ||diag(y)|| is its largest entry
  dc.d_minus = 1.0 / min_entry;
  dc.d_inf_minus = 1.0 / info.min_pi();
  return dc;
}

DConstants estimate_d_constants(const Matrix& A, const StationaryInfo& info,
                                int horizon, DMode mode) {
  const auto ys = y_calibration_trace(A, horizon);
  DConstants dc = d_constants_from_trace(ys, info);
  if (mode == DMode::analytic) {
    // Valid-for-all-k bounds: entries of y never exceed their total n, and
    // min_i y_i^k either sits within the scanned horizon or, past it, stays
    // above half the stationary floor once ||y^k - pi|| has dropped below
    // pi_min / 2 (the scan is extended until that holds).
    const int n = static_cast<int>(A.rows());
    double min_entry = 1.0 / dc.d_minus;
    Vector y = ys.back();
    int k = dc.horizon;
    const double floor_target = info.min_pi() / 2.0;
    while ((y - info.pi).lpNorm<Eigen::Infinity>() > floor_target &&
           k < 1000000) {
      y = A * y;
      min_entry = std::min(min_entry, y.minCoeff());
      ++k;
    }
    dc.mode = DMode::analytic;
    dc.horizon = k;
    dc.d = static_cast<double>(n);
    dc.d_minus = 1.0 / std::min(min_entry, floor_target);
  }
  return dc;
}

double eta_upper_bound(const DConstants& dc, double lipschitz, double strong) {
  const double coupling = dc.d_inf_minus * dc.d_minus * lipschitz;
  return strong / (dc.d * dc.d * (1.0 + coupling * coupling));
}

double delta_upper_bound(const MatrixSet& ms) {
  const double c2 = (ms.lambda_tilde_min_LtL > 0.0)
                        ? (ms.max_eig_NNt + ms.max_eig_N_sym) /
                              (2.0 * ms.lambda_tilde_min_LtL)
                        : 0.0;
  const double c7 = 0.5 * ms.max_eig_MMt + 4.0 * c2 * ms.max_eig_AtildeT_Atilde;
  return ms.min_eig_M_sym / (2.0 * c7);
}

ContractionConstants compute_constants(const MatrixSet& ms,
                                       const DConstants& dc, double lipschitz,
                                       double strong, double eta, double delta,
                                       double alpha) {
  const double eta_sup = eta_upper_bound(dc, lipschitz, strong);
  if (eta <= 0.0 || eta >= eta_sup) throw ParameterBound("eta", eta, eta_sup);
  const double delta_sup = delta_upper_bound(ms);
  if (delta <= 0.0 || delta >= delta_sup)
    throw ParameterBound("delta", delta, delta_sup);

  ContractionConstants c;
  c.eta = eta;
  c.delta = delta;
  c.alpha_ref = alpha;
  const int n = static_cast<int>(ms.M.rows());
  const double coupling = dc.d_inf_minus * dc.d_minus * lipschitz;

  c.c1 = dc.d_minus *
         (dc.d * ms.norm_I_plus_A + dc.d * ms.norm_A_tilde + 2.0 * alpha * lipschitz);
  c.c2 = (ms.lambda_tilde_min_LtL > 0.0)
             ? (ms.max_eig_NNt + ms.max_eig_N_sym) /
                   (2.0 * ms.lambda_tilde_min_LtL)
             : 0.0;
  const double nc = n * 4.0;  // n * C with the universal C = 4
  c.c3 = alpha * nc * nc *
         (c.c1 * c.c1 / (2.0 * eta) +
          coupling * coupling * (eta + 1.0 / eta) +
          strong / (dc.d * dc.d));
  c.c4 = 8.0 * c.c2 * (lipschitz * dc.d_minus) * (lipschitz * dc.d_minus);
  c.c5 = 0.5 * ms.max_eig_M_sym + 4.0 * c.c2 * ms.max_eig_RtR;
  c.c6 = 0.5 * (strong / (dc.d * dc.d) - eta - 2.0 * eta * coupling * coupling);
  c.c7 = 0.5 * ms.max_eig_MMt + 4.0 * c.c2 * ms.max_eig_AtildeT_Atilde;
  c.discriminant =
      c.c6 * c.c6 - 4.0 * c.c4 * delta * (1.0 / delta + c.c5 * delta);
  return c;
}

namespace {

StepSizeInterval interval_from_constants(const ContractionConstants& c,
                                         const MatrixSet& ms,
                                         const DConstants& dc,
                                         double lipschitz, double eta,
                                         double delta) {
  StepSizeInterval out;
  const double coupling = dc.d_inf_minus * dc.d_minus * lipschitz;
  const double eta_cap =
      eta * ms.min_eig_M_sym / (2.0 * coupling * coupling);

  if (c.c4 == 0.0) {
    // Degenerate quadratic: the constraint is linear in alpha.
    if (c.c6 <= 0.0) {
      out.diagnostic = "c6 <= 0: the strong-convexity margin is exhausted";
      return out;
    }
    out.alpha_lo = (1.0 / delta + c.c5 * delta) / c.c6;
    out.alpha_hi = eta_cap;
    out.feasible = out.alpha_lo <= out.alpha_hi;
    if (!out.feasible) out.diagnostic = "linear lower root exceeds the eta cap";
    return out;
  }

  if (c.discriminant < 0.0) {
    out.diagnostic =
        "discriminant c6^2 - 4 c4 delta (1/delta + c5 delta) is negative";
    return out;
  }
  const double root = std::sqrt(c.discriminant);
  out.alpha_lo = (c.c6 - root) / (2.0 * c.c4 * delta);
  out.alpha_hi = std::min(eta_cap, (c.c6 + root) / (2.0 * c.c4 * delta));
  out.feasible = out.alpha_lo > 0.0 && out.alpha_lo <= out.alpha_hi;
  if (!out.feasible)
    out.diagnostic = out.alpha_lo <= 0.0
                         ? "nonpositive lower endpoint"
                         : "quadratic window lies above the eta cap";
  return out;
}

}  // namespace

StepSizeInterval step_size_interval(const MatrixSet& ms, const DConstants& dc,
                                    double lipschitz, double strong,
                                    double eta, double delta) {
  // c1 (hence c3) depends on alpha, so resolve the endpoints as a fixed
  // point: evaluate the constants at a candidate alpha, recompute the
  // interval, and repeat until the endpoints settle. The interval itself
  // depends on alpha only through that evaluation point, so this settles
  // almost immediately.
  double alpha = 0.1;
  StepSizeInterval interval;
  for (int round = 0; round < 50; ++round) {
    const ContractionConstants c =
        compute_constants(ms, dc, lipschitz, strong, eta, delta, alpha);
    StepSizeInterval next =
        interval_from_constants(c, ms, dc, lipschitz, eta, delta);
    const bool settled =
        round > 0 && std::abs(next.alpha_lo - interval.alpha_lo) <= 1e-10 &&
        std::abs(next.alpha_hi - interval.alpha_hi) <= 1e-10;
    interval = next;
    if (!interval.feasible || settled) break;
    alpha = interval.alpha_hi;
  }
  return interval;
}

StepSizeInterval estimated_step_size_interval(const MatrixSet& ms,
                                              const DConstants& dc,
                                              double lipschitz, double strong,
                                              double eta, double delta) {
  const ContractionConstants c =
      compute_constants(ms, dc, lipschitz, strong, eta, delta, 0.1);
  StepSizeInterval out;
  const double coupling = dc.d_inf_minus * dc.d_minus * lipschitz;
  out.alpha_hi = eta * ms.min_eig_M_sym / (2.0 * coupling * coupling);
  const double lo =
      (strong / (2.0 * dc.d * dc.d) - eta / 2.0) / (2.0 * c.c2 * delta);
  out.alpha_lo = std::max(0.0, lo);
  out.feasible = out.alpha_hi > 0.0 && out.alpha_lo <= out.alpha_hi;
  if (!out.feasible)
    out.diagnostic = "estimated lower endpoint exceeds the eta cap";
  return out;
}

RateCertificate certify_step_size(const ObjectiveSuite& problem,
                                  const WeightPair& pair,
                                  const StationaryInfo& info,
                                  const CertifyOptions& options) {
  RateCertificate cert;
  cert.n = problem.agents();
  const auto [lipschitz, strong] = estimate_constants(problem);
  cert.lipschitz = lipschitz;
  cert.strong = strong;
  cert.gamma = info.gamma;
  cert.big_c = info.big_c;

  const MatrixSet ms = build_matrix_set(pair, info);
  cert.min_eig_M_sym = ms.min_eig_M_sym;
  cert.positivity_ok = ms.positivity_ok;
  cert.positivity_min_eig = ms.min_eig_M_sym;

  cert.dc = estimate_d_constants(pair.A, info, options.calibration_horizon,
                                 options.d_mode);
  cert.d_margin = options.d_margin;
  cert.dc.d *= 1.0 + options.d_margin;
  cert.dc.d_minus *= 1.0 + options.d_margin;

  cert.eta_sup = eta_upper_bound(cert.dc, lipschitz, strong);
  cert.delta_sup = delta_upper_bound(ms);
  cert.eta = options.eta_fraction * cert.eta_sup;
  cert.delta = options.delta_fraction * cert.delta_sup;

  cert.strict = step_size_interval(ms, cert.dc, lipschitz, strong, cert.eta,
                                   cert.delta);
  cert.estimated = estimated_step_size_interval(ms, cert.dc, lipschitz, strong,
                                                cert.eta, cert.delta);
  const double alpha_ref =
      cert.interval().feasible ? cert.interval().alpha_hi : 0.1;
  cert.constants = compute_constants(ms, cert.dc, lipschitz, strong, cert.eta,
                                     cert.delta, alpha_ref);
  return cert;
}

RateFit fit_linear_rate(const std::vector<double>& series, int burn_in) {
  if (static_cast<int>(series.size()) - burn_in < 2)
    throw std::invalid_argument("need at least two points after burn-in");
  for (std::size_t i = burn_in; i < series.size(); ++i)
    if (!(series[i] > 0.0))
      throw std::invalid_argument("series entry " + std::to_string(i) +
                                  " is not positive");
  const int count = static_cast<int>(series.size()) - burn_in;
  double mean_k = 0.0, mean_y = 0.0;
  for (int t = 0; t < count; ++t) {
    mean_k += t;
    mean_y += std::log(series[burn_in + t]);
  }
  mean_k /= count;
  mean_y /= count;
  double skk = 0.0, sky = 0.0, syy = 0.0;
  for (int t = 0; t < count; ++t) {
    const double dk = t - mean_k;
    const double dy = std::log(series[burn_in + t]) - mean_y;
    skk += dk * dk;
    sky += dk * dy;
    syy += dy * dy;
  }
  RateFit fit;
  fit.slope = sky / skk;
  fit.tau = std::exp(fit.slope);
  // A variance at the rounding floor of the log means the series is
  // constant; the fit quality is undefined there.
  const double floor = count * std::pow(1e-14 * (1.0 + std::abs(mean_y)), 2);
  if (syy > floor) {
    const double sse = syy - sky * sky / skk;
    fit.r_squared = 1.0 - std::max(0.0, sse) / syy;
    fit.r2_defined = true;
  } else {
    fit.slope = 0.0;
    fit.tau = 1.0;
  }
  return fit;
}

namespace {

/// <a, (B otimes I) a> for row-stacked a (rows of the n x p matrix are the
/// per-agent blocks).
double block_quadratic_form(const Matrix& B, const Matrix& a) {
  return (a.transpose() * (B * a)).trace();
}

}  // namespace

LyapunovReport lyapunov_validate(const ObjectiveSuite& problem,
                                 const WeightPair& pair,
                                 const StationaryInfo& info, const Vector& u,
                                 double alpha, double delta,
                                 const RunOptions& options) {
  LyapunovReport report;
  report.delta = delta;
  report.gamma_universal = info.gamma;

  const int n = problem.agents();
  const int p = problem.dim();
  const MatrixSet ms = build_matrix_set(pair, info);
  const CompiledWeights w = compile(pair);

  // Fixed-point targets. x = diag(y) z throughout, so the top block of the
  // functional compares x^k against pi u^T directly.
  const Matrix x_star = info.pi * u.transpose();
  Matrix grad_star(n, p);
  for (int i = 0; i < n; ++i)
    grad_star.row(i) = problem.gradient(i, u).transpose();

  // Minimum-norm q* with L q* = -alpha grad(z*); consistent because the
  // aggregated gradient vanishes at the optimum (columns of L sum to zero).
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(ms.L);
  const Matrix q_star = cod.solve(-alpha * grad_star);

  const Vector pi_unit = info.pi / info.pi.norm();

  auto seminorm = [&](const Matrix& x, const Matrix& q) {
    const Matrix dx = x - x_star;
    // Deflate the pi-direction of the q block. N annihilates it from both
    // sides in exact arithmetic (N pi = 0, pi^T N = 0 after scaling), but q
    // grows along pi without bound, so the rounding noise of the raw product
    // would swamp the value at late iterations.
    Matrix dq = q - q_star;
    dq -= pi_unit * (pi_unit.transpose() * dq);
    return block_quadratic_form(ms.M.transpose(), dx) +
           block_quadratic_form(ms.N, dq);
  };

  Matrix x0 = options.x0.size() ? options.x0 : Matrix::Zero(n, p);
  std::vector<double> y_gap;  // ||diag(y^k) - diag(pi)|| for gamma_hat

  Matrix q = x0;  // q^0 = x^0
  report.g_seminorm.push_back(seminorm(x0, q));
  report.dz_error_sq.push_back((x0 - x_star).squaredNorm());
  y_gap.push_back((Vector::Ones(n) - info.pi).lpNorm<Eigen::Infinity>());

  StopReason reason = StopReason::iteration_budget;
  try {
    NetworkState state = init(problem, w, x0, alpha);
    q += state.x;
    report.g_seminorm.push_back(seminorm(state.x, q));
    report.dz_error_sq.push_back((state.x - x_star).squaredNorm());
    y_gap.push_back((state.y - info.pi).lpNorm<Eigen::Infinity>());
    while (state.k < options.max_iter) {
      if (residual(state.z, u) <= options.target_residual) {
        reason = StopReason::converged;
        break;
      }
      step(state, problem, w, alpha);
      q += state.x;
      report.g_seminorm.push_back(seminorm(state.x, q));
      report.dz_error_sq.push_back((state.x - x_star).squaredNorm());
      y_gap.push_back((state.y - info.pi).lpNorm<Eigen::Infinity>());
    }
    if (reason != StopReason::converged &&
        residual(state.z, u) <= options.target_residual)
      reason = StopReason::converged;
  } catch (const DivergenceError&) {
    reason = StopReason::diverged;
  }
  report.run_reason = reason;
  report.applicable = reason == StopReason::converged;
  if (!report.applicable) return report;

  report.min_seminorm =
      *std::min_element(report.g_seminorm.begin(), report.g_seminorm.end());
  report.seminorm_nonnegative = report.min_seminorm >= -1e-10;

  // Smallest Gamma with s_k >= (1+delta) s_{k+1} - Gamma gamma^k for all k.
  double big_gamma = 0.0;
  double gk = 1.0;
  for (std::size_t k = 0; k + 1 < report.g_seminorm.size(); ++k) {
    const double need =
        ((1.0 + delta) * report.g_seminorm[k + 1] - report.g_seminorm[k]) / gk;
    big_gamma = std::max(big_gamma, need);
    gk *= info.gamma;
  }
  report.big_gamma_hat = big_gamma;

  // Empirical consensus rate from the mixing gap, ignoring entries at the
  // rounding floor.
  {
    std::vector<double> positive;
    for (double v : y_gap)
      if (v > 1e-14) positive.push_back(v);
    if (positive.size() >= 10) {
      report.gamma_hat = fit_linear_rate(positive, 0).tau;
    } else {
      report.gamma_hat = 0.0;  // mixing finished within a few rounds
    }
  }

  // Linear-rate fit of the squared fixed-point error, trimmed at the
  // rounding floor relative to its starting value.
  {
    std::vector<double> trimmed;
    const double floor =
        std::max(report.dz_error_sq.front(), 1.0) * 1e-28;
    for (double v : report.dz_error_sq) {
      if (v <= floor) break;
      trimmed.push_back(v);
    }
    const int burn = static_cast<int>(trimmed.size() / 10);
    if (static_cast<int>(trimmed.size()) - burn >= 2)
      report.dz_fit = fit_linear_rate(trimmed, burn);
  }
  {
    std::vector<double> trimmed;
    const double floor = std::max(report.g_seminorm.front(), 1.0) * 1e-28;
    for (double v : report.g_seminorm) {
      if (v <= floor) break;
      trimmed.push_back(v);
    }
    const int burn = static_cast<int>(trimmed.size() / 10);
    if (static_cast<int>(trimmed.size()) - burn >= 2)
      report.seminorm_fit = fit_linear_rate(trimmed, burn);
  }
  return report;
}

}  // namespace dextra
