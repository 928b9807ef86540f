#include "dextra/engine.hpp"

#include <chrono>
#include <cmath>

namespace dextra {

CompiledWeights compile(const WeightPair& pair) {
  const int n = static_cast<int>(pair.A.rows());
  CompiledWeights w;
  w.n = n;
  w.theta = pair.theta;
  w.A = pair.A;
  w.A_tilde = pair.A_tilde;
  w.mix.resize(n);
  w.damped.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (pair.A(i, j) != 0.0) w.mix[i].push_back({j, pair.A(i, j)});
      if (pair.A_tilde(i, j) != 0.0) w.damped[i].push_back({j, pair.A_tilde(i, j)});
    }
  }
  return w;
}

NetworkState init(const ObjectiveSuite& problem, const CompiledWeights& w,
                  const Matrix& x0, double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("step size must be positive");
  if (x0.rows() != w.n || x0.cols() != problem.dim() ||
      problem.agents() != w.n)
    throw std::invalid_argument("dimension mismatch between problem, weights "
                                "and initial state");
  const int p = problem.dim();

  NetworkState s;
  s.x_prev = x0;
  s.grad_prev = problem.stacked_gradient(x0);  // z0 = x0 since y0 = 1
  s.x.setZero(w.n, p);
  s.y.resize(w.n);
  for (int i = 0; i < w.n; ++i) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(p);
    double ysum = 0.0;
    for (const auto& [j, a] : w.mix[i]) {
      acc += a * x0.row(j);
      ysum += a;  // y0 = 1
    }
    s.x.row(i) = acc - alpha * s.grad_prev.row(i);
    s.y(i) = ysum;
  }
  s.z = s.x.array().colwise() / s.y.array();
  s.k = 1;
  if (!s.x.allFinite() || !s.y.allFinite()) throw DivergenceError(1);
  return s;
}

StepStats step(NetworkState& state, const ObjectiveSuite& problem,
               const CompiledWeights& w, double alpha) {
  const int p = static_cast<int>(state.x.cols());
  const Matrix grad = problem.stacked_gradient(state.z);

  Matrix x_next(w.n, p);
  Vector y_next(w.n);
  for (int i = 0; i < w.n; ++i) {
    Eigen::RowVectorXd acc = state.x.row(i);
    double ysum = 0.0;
    for (const auto& [j, a] : w.mix[i]) {
      acc += a * state.x.row(j);
      ysum += a * state.y(j);
    }
    for (const auto& [j, at] : w.damped[i]) acc -= at * state.x_prev.row(j);
    acc -= alpha * (grad.row(i) - state.grad_prev.row(i));
    x_next.row(i) = acc;
    y_next(i) = ysum;
  }
  if (!x_next.allFinite() || !y_next.allFinite())
    throw DivergenceError(state.k + 1);

  StepStats stats;
  const Eigen::RowVectorXd before = state.x.colwise().sum();
  const Eigen::RowVectorXd after = x_next.colwise().sum();
  const Eigen::RowVectorXd pulled = alpha * grad.colwise().sum();
  const double scale = std::max({1.0, before.cwiseAbs().maxCoeff(),
                                 pulled.cwiseAbs().maxCoeff()});
  stats.conservation_defect =
      (after - before + pulled).cwiseAbs().maxCoeff() / scale;
  stats.y_sum_defect = std::abs(y_next.sum() - w.n) / w.n;

  state.x_prev = std::move(state.x);
  state.grad_prev = grad;
  state.x = std::move(x_next);
  state.y = std::move(y_next);
  state.z = state.x.array().colwise() / state.y.array();
  ++state.k;
  return stats;
}

double residual(const Matrix& z, const Vector& u) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    acc += (z.row(i).transpose() - u).norm();
  return acc / static_cast<double>(z.rows());
}

double consensus_spread(const Matrix& z) {
  double spread = 0.0;
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = i + 1; j < z.rows(); ++j)
      spread = std::max(spread, (z.row(i) - z.row(j)).norm());
  return spread;
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::converged: return "converged";
    case StopReason::iteration_budget: return "iteration-budget";
    case StopReason::diverged: return "diverged";
  }
  return "unknown";
}

double RunTrace::max_conservation_defect() const {
  double m = 0.0;
  for (double d : conservation_defects) m = std::max(m, d);
  return m;
}

double RunTrace::max_y_sum_defect() const {
  double m = 0.0;
  for (double d : y_sum_defects) m = std::max(m, d);
  return m;
}

RunTrace run(const ObjectiveSuite& problem, const CompiledWeights& w,
             double alpha, const Vector& u, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const int p = problem.dim();
  Matrix x0 = options.x0.size() ? options.x0 : Matrix::Zero(w.n, p);

  RunTrace trace;
  trace.alpha = alpha;
  trace.residuals.push_back(residual(x0, u));  // z0 = x0
  trace.consensus_spreads.push_back(consensus_spread(x0));
  trace.conservation_defects.push_back(0.0);
  trace.y_sum_defects.push_back(0.0);
  if (options.snapshot_stride > 0) trace.snapshots.push_back(x0);

  const double initial_residual = trace.residuals.front();
  const double divergence_level =
      initial_residual > 0.0
          ? options.divergence_factor * initial_residual
          : options.divergence_factor;

  auto record = [&](const NetworkState& s, const StepStats& stats) {
    trace.residuals.push_back(residual(s.z, u));
    trace.consensus_spreads.push_back(consensus_spread(s.z));
    trace.conservation_defects.push_back(stats.conservation_defect);
    trace.y_sum_defects.push_back(stats.y_sum_defect);
    if (options.snapshot_stride > 0 && s.k % options.snapshot_stride == 0)
      trace.snapshots.push_back(s.z);
  };

  NetworkState state;
  trace.reason = StopReason::iteration_budget;
  if (initial_residual <= options.target_residual) {
    trace.reason = StopReason::converged;
    trace.iterations = 0;
    state.x = x0;
    state.y = Vector::Ones(w.n);
    state.z = x0;
    state.x_prev = Matrix::Zero(w.n, p);
    state.grad_prev = Matrix::Zero(w.n, p);
  } else {
    try {
      // Round 0 -> 1. The first update conserves mass by construction; its
      // defect is measured the same way as the generic step's.
      const Matrix g0 = problem.stacked_gradient(x0);
      state = init(problem, w, x0, alpha);
      StepStats stats0;
      const Eigen::RowVectorXd before = x0.colwise().sum();
      const Eigen::RowVectorXd after = state.x.colwise().sum();
      const Eigen::RowVectorXd pulled = alpha * g0.colwise().sum();
      const double scale = std::max({1.0, before.cwiseAbs().maxCoeff(),
                                     pulled.cwiseAbs().maxCoeff()});
      stats0.conservation_defect =
          (after - before + pulled).cwiseAbs().maxCoeff() / scale;
      stats0.y_sum_defect = std::abs(state.y.sum() - w.n) / w.n;
      record(state, stats0);

      while (state.k < options.max_iter) {
        if (trace.residuals.back() <= options.target_residual) break;
        if (trace.residuals.back() > divergence_level) break;
        record(state, step(state, problem, w, alpha));
      }
      if (trace.residuals.back() <= options.target_residual)
        trace.reason = StopReason::converged;
      else if (trace.residuals.back() > divergence_level)
        trace.reason = StopReason::diverged;
    } catch (const DivergenceError&) {
      trace.reason = StopReason::diverged;
    }
    trace.iterations = static_cast<long>(trace.residuals.size()) - 1;
    trace.final_state = state;
  }
  if (trace.final_state.x.size() == 0) trace.final_state = state;

  const auto t1 = std::chrono::steady_clock::now();
  trace.seconds_total = std::chrono::duration<double>(t1 - t0).count();
  trace.seconds_per_iter =
      trace.iterations > 0 ? trace.seconds_total / trace.iterations : 0.0;
  return trace;
}

}  // namespace dextra
