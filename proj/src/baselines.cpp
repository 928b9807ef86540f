#include "dextra/baselines.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace dextra {

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "dextra") return Algorithm::dextra;
  if (name == "extra") return Algorithm::extra;
  if (name == "dgd-row" || name == "dgd_row") return Algorithm::dgd_row;
  if (name == "gradient-push" || name == "gradient_push" || name == "gp")
    return Algorithm::gradient_push;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::dextra: return "dextra";
    case Algorithm::extra: return "extra";
    case Algorithm::dgd_row: return "dgd-row";
    case Algorithm::gradient_push: return "gradient-push";
  }
  return "unknown";
}

void validate(const BaselineConfig& config) {
  if (config.alpha <= 0.0)
    throw std::invalid_argument("base step size must be positive");
  if (config.schedule == StepSchedule::inv_sqrt &&
      config.algorithm != Algorithm::dgd_row &&
      config.algorithm != Algorithm::gradient_push)
    throw std::invalid_argument(
        "the diminishing schedule pairs with dgd-row and gradient-push only");
}

double schedule_step(StepSchedule schedule, double alpha, long k) {
  if (schedule == StepSchedule::constant) return alpha;
  return alpha / std::sqrt(static_cast<double>(k + 1));
}

Matrix extra_step(const Matrix& x, const Matrix& x_prev, const Matrix& grads,
                  const Matrix& grads_prev, const Matrix& W,
                  const Matrix& W_tilde, double alpha) {
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("mixing matrix must be symmetric");
  return x + W * x - W_tilde * x_prev - alpha * (grads - grads_prev);
}

Matrix dgd_row_step(const Matrix& x, const Matrix& grads, const Matrix& W_row,
                    double alpha_k) {
  return W_row * x - alpha_k * grads;
}

std::pair<Matrix, Vector> gradient_push_step(const Matrix& w,
                                             const Vector& y_ps,
                                             const Matrix& grads_at_z,
                                             const Matrix& A, double alpha_k) {
  if (y_ps.minCoeff() <= 0.0)
    throw std::invalid_argument("push-sum scalars must stay positive");
  return {A * (w - alpha_k * grads_at_z), A * y_ps};
}

Matrix row_stochastic_weights(const Digraph& g) {
  const int n = g.size();
  Matrix W = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double w = 1.0 / g.in_degree(i);
    for (int j : g.in_neighbors(i)) W(i, j) = w;
  }
  return W;
}

Matrix metropolis_weights(const Digraph& g) {
  const int n = g.size();
  for (const auto& [i, j] : g.edges())
    if (!g.has_edge(j, i))
      throw std::invalid_argument("metropolis weights need a symmetric edge set");
  Matrix W = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j : g.in_neighbors(i)) {
      if (j == i) continue;
      W(i, j) = 1.0 / (1.0 + std::max(g.in_degree(i), g.in_degree(j)));
      off += W(i, j);
    }
    W(i, i) = 1.0 - off;
  }
  return W;
}

namespace {

struct SeriesRecorder {
  RunTrace trace;
  const Vector* u;
  const RunOptions* options;
  double divergence_level = 0.0;

  SeriesRecorder(const Matrix& z0, const Vector& u_, const RunOptions& opts,
                 double alpha) : u(&u_), options(&opts) {
    trace.alpha = alpha;
    trace.residuals.push_back(residual(z0, *u));
    trace.consensus_spreads.push_back(consensus_spread(z0));
    trace.conservation_defects.push_back(0.0);
    trace.y_sum_defects.push_back(0.0);
    if (opts.snapshot_stride > 0) trace.snapshots.push_back(z0);
    const double r0 = trace.residuals.front();
    divergence_level = r0 > 0.0 ? opts.divergence_factor * r0
                                : opts.divergence_factor;
  }

  void push(const Matrix& z, long k, double conservation, double y_defect) {
    trace.residuals.push_back(residual(z, *u));
    trace.consensus_spreads.push_back(consensus_spread(z));
    trace.conservation_defects.push_back(conservation);
    trace.y_sum_defects.push_back(y_defect);
    if (options->snapshot_stride > 0 && k % options->snapshot_stride == 0)
      trace.snapshots.push_back(z);
  }

  bool done() const {
    return trace.residuals.back() <= options->target_residual ||
           trace.residuals.back() > divergence_level;
  }

  void finish() {
    if (trace.residuals.back() <= options->target_residual)
      trace.reason = StopReason::converged;
    else if (trace.residuals.back() > divergence_level)
      trace.reason = StopReason::diverged;
    else
      trace.reason = StopReason::iteration_budget;
    trace.iterations = static_cast<long>(trace.residuals.size()) - 1;
  }
};

double mass_defect(const Matrix& before, const Matrix& after,
                   const Matrix& grads, double alpha_k) {
  const Eigen::RowVectorXd b = before.colwise().sum();
  const Eigen::RowVectorXd a = after.colwise().sum();
  const Eigen::RowVectorXd g = alpha_k * grads.colwise().sum();
  const double scale =
      std::max({1.0, b.cwiseAbs().maxCoeff(), g.cwiseAbs().maxCoeff()});
  return (a - b + g).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

RunTrace run_extra(const ObjectiveSuite& problem, const Matrix& W,
                   const Matrix& W_tilde, double alpha, const Vector& u,
                   const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = problem.agents();
  const int p = problem.dim();
  Matrix x0 = options.x0.size() ? options.x0 : Matrix::Zero(n, p);

  SeriesRecorder rec(x0, u, options, alpha);
  if (!rec.done()) {
    Matrix grads_prev = problem.stacked_gradient(x0);
    Matrix x = W * x0 - alpha * grads_prev;
    Matrix x_prev = x0;
    long k = 1;
    rec.push(x, k, mass_defect(x_prev, x, grads_prev, alpha), 0.0);
    while (k < options.max_iter && !rec.done()) {
      const Matrix grads = problem.stacked_gradient(x);
      Matrix x_next = extra_step(x, x_prev, grads, grads_prev, W, W_tilde, alpha);
      if (!x_next.allFinite()) {
        rec.trace.reason = StopReason::diverged;
        rec.trace.iterations = static_cast<long>(rec.trace.residuals.size()) - 1;
        rec.trace.seconds_total =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        return rec.trace;
      }
      x_prev = std::move(x);
      x = std::move(x_next);
      grads_prev = grads;
      ++k;
      rec.push(x, k, mass_defect(x_prev, x, grads_prev, alpha), 0.0);
    }
  }
  rec.finish();
  rec.trace.seconds_total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (rec.trace.iterations > 0)
    rec.trace.seconds_per_iter = rec.trace.seconds_total / rec.trace.iterations;
  return rec.trace;
}

RunTrace run_dgd_row(const ObjectiveSuite& problem, const Matrix& W_row,
                     double alpha, StepSchedule schedule, const Vector& u,
                     const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = problem.agents();
  const int p = problem.dim();
  Matrix x = options.x0.size() ? options.x0 : Matrix::Zero(n, p);

  SeriesRecorder rec(x, u, options, alpha);
  long k = 0;
  while (k < options.max_iter && !rec.done()) {
    const Matrix grads = problem.stacked_gradient(x);
    Matrix x_next = dgd_row_step(x, grads, W_row, schedule_step(schedule, alpha, k));
    if (!x_next.allFinite()) {
      rec.trace.reason = StopReason::diverged;
      rec.trace.iterations = static_cast<long>(rec.trace.residuals.size()) - 1;
      return rec.trace;
    }
    x = std::move(x_next);
    ++k;
    rec.push(x, k, 0.0, 0.0);  // row mixing does not conserve column sums
  }
  rec.finish();
  rec.trace.seconds_total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (rec.trace.iterations > 0)
    rec.trace.seconds_per_iter = rec.trace.seconds_total / rec.trace.iterations;
  return rec.trace;
}

RunTrace run_gradient_push(const ObjectiveSuite& problem, const Matrix& A,
                           double alpha, StepSchedule schedule,
                           const Vector& u, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = problem.agents();
  const int p = problem.dim();
  Matrix w = options.x0.size() ? options.x0 : Matrix::Zero(n, p);
  Vector y = Vector::Ones(n);
  Matrix z = w;  // y = 1

  SeriesRecorder rec(z, u, options, alpha);
  long k = 0;
  while (k < options.max_iter && !rec.done()) {
    const Matrix grads = problem.stacked_gradient(z);
    const double alpha_k = schedule_step(schedule, alpha, k);
    auto [w_next, y_next] = gradient_push_step(w, y, grads, A, alpha_k);
    if (!w_next.allFinite() || !y_next.allFinite() || y_next.minCoeff() <= 0.0) {
      rec.trace.reason = StopReason::diverged;
      rec.trace.iterations = static_cast<long>(rec.trace.residuals.size()) - 1;
      return rec.trace;
    }
    const double defect = mass_defect(w, w_next, grads, alpha_k);
    const double y_defect = std::abs(y_next.sum() - n) / n;
    w = std::move(w_next);
    y = std::move(y_next);
    z = w.array().colwise() / y.array();
    ++k;
    rec.push(z, k, defect, y_defect);
  }
  rec.finish();
  rec.trace.seconds_total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (rec.trace.iterations > 0)
    rec.trace.seconds_per_iter = rec.trace.seconds_total / rec.trace.iterations;
  return rec.trace;
}

}  // namespace dextra
