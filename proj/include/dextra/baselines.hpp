#pragma once

#include "dextra/digraph.hpp"
#include "dextra/engine.hpp"
#include "dextra/linalg.hpp"
#include "dextra/objectives.hpp"

namespace dextra {

enum class Algorithm { dextra, extra, dgd_row, gradient_push };
enum class StepSchedule { constant, inv_sqrt };  // alpha_k = alpha / sqrt(k+1)

Algorithm algorithm_from_string(const std::string& name);
std::string to_string(Algorithm a);

struct BaselineConfig {
  Algorithm algorithm = Algorithm::extra;
  double alpha = 0.1;
  StepSchedule schedule = StepSchedule::constant;
};

/// Throws unless the schedule/algorithm pairing is meaningful: the
/// diminishing schedule belongs to dgd_row and gradient_push only.
void validate(const BaselineConfig& config);

double schedule_step(StepSchedule schedule, double alpha, long k);

/// Double-memory update with two symmetric doubly-stochastic matrices:
/// x_next = (I + W) x - W_tilde x_prev - alpha (grads - grads_prev).
/// Rejects W that is non-symmetric beyond 1e-12.
Matrix extra_step(const Matrix& x, const Matrix& x_prev, const Matrix& grads,
                  const Matrix& grads_prev, const Matrix& W,
                  const Matrix& W_tilde, double alpha);

/// x_next = W_row x - alpha_k grads (plain mixed gradient descent).
Matrix dgd_row_step(const Matrix& x, const Matrix& grads, const Matrix& W_row,
                    double alpha_k);

/// Push-sum gradient step: w_next = A (w - alpha_k grads_at_z),
/// y_next = A y; callers recover z as w_next / y_next rowwise.
std::pair<Matrix, Vector> gradient_push_step(const Matrix& w,
                                             const Vector& y_ps,
                                             const Matrix& grads_at_z,
                                             const Matrix& A, double alpha_k);

/// Uniform averaging over in-neighbors; row-stochastic by construction.
Matrix row_stochastic_weights(const Digraph& g);

/// Symmetric doubly-stochastic weights for graphs with a symmetric edge set
/// (Metropolis rule). Throws when the edge set is not symmetric.
Matrix metropolis_weights(const Digraph& g);

RunTrace run_extra(const ObjectiveSuite& problem, const Matrix& W,
                   const Matrix& W_tilde, double alpha, const Vector& u,
                   const RunOptions& options);
RunTrace run_dgd_row(const ObjectiveSuite& problem, const Matrix& W_row,
                     double alpha, StepSchedule schedule, const Vector& u,
                     const RunOptions& options);
RunTrace run_gradient_push(const ObjectiveSuite& problem, const Matrix& A,
                           double alpha, StepSchedule schedule,
                           const Vector& u, const RunOptions& options);

}  // namespace dextra
