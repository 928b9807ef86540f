#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dextra/linalg.hpp"
#include "dextra/objectives.hpp"
#include "dextra/weights.hpp"

namespace dextra {

/// Per-agent view of the weight pair: for each receiver i, the list of
/// (sender, weight) contributions. The update loop runs over these lists, so
/// an agent only ever reads messages from its in-neighbors; the dense
/// matrices are kept for analysis and serialization.
struct CompiledWeights {
  int n = 0;
  double theta = 0.5;
  std::vector<std::vector<std::pair<int, double>>> mix;     // from A
  std::vector<std::vector<std::pair<int, double>>> damped;  // from A_tilde
  Matrix A;
  Matrix A_tilde;
};

CompiledWeights compile(const WeightPair& pair);

/// Network iterate: row i of x/z holds agent i's vectors, y holds the
/// push-sum scalars. Invariants: y > 0 entrywise, sum(y) = n, and z = x / y
/// rowwise exactly as stored. x_prev and grad_prev carry the one-step memory
/// the update needs.
struct NetworkState {
  Matrix x;
  Vector y;
  Matrix z;
  Matrix x_prev;
  Matrix grad_prev;
  long k = 0;
};

class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(long iteration)
      : std::runtime_error("non-finite iterate at iteration " +
                           std::to_string(iteration)),
        iteration(iteration) {}
  long iteration;
};

/// First round: z0 = x0 (y0 = 1), x1_i = sum_j a_ij x0_j - alpha grad_i(z0),
/// y1 = A y0. The returned state sits at k = 1 with the memory fields set to
/// the round-0 quantities.
NetworkState init(const ObjectiveSuite& problem, const CompiledWeights& w,
                  const Matrix& x0, double alpha);

struct StepStats {
  /// max-norm of colsum(x_next) - colsum(x) + alpha * colsum(grad), relative
  /// to the scale of the participating column sums. Zero in exact arithmetic.
  double conservation_defect = 0.0;
  /// |sum(y) - n| / n after the update.
  double y_sum_defect = 0.0;
};

/// One synchronous round: every agent reads its in-neighbors' k-indexed
/// messages and writes the k+1 iterate. Throws DivergenceError on any
/// non-finite value.
StepStats step(NetworkState& state, const ObjectiveSuite& problem,
               const CompiledWeights& w, double alpha);

/// Mean per-agent distance to u: (1/n) sum_i ||z_i - u||.
double residual(const Matrix& z, const Vector& u);
/// max_{i,j} ||z_i - z_j||.
double consensus_spread(const Matrix& z);

enum class StopReason { converged, iteration_budget, diverged };
std::string to_string(StopReason reason);

struct RunOptions {
  long max_iter = 5000;
  double target_residual = 1e-10;
  int snapshot_stride = 0;  // 0 = no snapshots
  /// A run whose residual exceeds divergence_factor times its initial value
  /// stops with StopReason::diverged.
  double divergence_factor = 1e6;
  Matrix x0;  // empty = zeros
};

struct RunTrace {
  std::vector<double> residuals;             // index k
  std::vector<double> consensus_spreads;     // index k
  std::vector<double> conservation_defects;  // defect of the step into k; [0] = 0
  std::vector<double> y_sum_defects;
  std::vector<Matrix> snapshots;  // z at the configured stride
  NetworkState final_state;
  double alpha = 0.0;
  StopReason reason = StopReason::iteration_budget;
  long iterations = 0;
  double seconds_total = 0.0;
  double seconds_per_iter = 0.0;

  double final_residual() const { return residuals.back(); }
  double max_conservation_defect() const;
  double max_y_sum_defect() const;
};

RunTrace run(const ObjectiveSuite& problem, const CompiledWeights& w,
             double alpha, const Vector& u, const RunOptions& options);

}  // namespace dextra
