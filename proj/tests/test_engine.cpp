#include <doctest.h>

#include <set>

#include "dextra/baselines.hpp"
#include "dextra/engine.hpp"
#include "dextra/rng.hpp"
#include "dextra/weights.hpp"
#include "oracles.hpp"

using dextra::CompiledWeights;
using dextra::Digraph;
using dextra::Matrix;
using dextra::Vector;
using dextra::WeightPair;

namespace {

WeightPair cycle_weights(int n) {
  std::set<Digraph::Edge> edges;
  for (int v = 0; v < n; ++v) {
    edges.insert({v, v});
    edges.insert({(v + 1) % n, v});
  }
  return dextra::make_tilde(dextra::local_degree_weights(Digraph(n, edges)),
                            0.5);
}

Digraph symmetric_ring(int n, int chords, std::uint64_t seed) {
  std::set<Digraph::Edge> edges;
  for (int v = 0; v < n; ++v) {
    edges.insert({v, v});
    edges.insert({(v + 1) % n, v});
    edges.insert({v, (v + 1) % n});
  }
  dextra::Rng rng(seed);
  int added = 0;
  while (added < chords) {
    const int a = static_cast<int>(rng.uniform_int(0, n - 1));
    const int b = static_cast<int>(rng.uniform_int(0, n - 1));
    if (a == b || edges.count({a, b})) continue;
    edges.insert({a, b});
    edges.insert({b, a});
    ++added;
  }
  return Digraph(n, edges);
}

}  // namespace

TEST_CASE("first round from zero is a pure gradient pull") {
  const auto inst = dextra::generate_least_squares(3, 2, 4, 0.1, 2);
  const auto w = dextra::compile(cycle_weights(3));
  const Matrix x0 = Matrix::Zero(3, 2);
  const auto state = dextra::init(inst, w, x0, 0.2);
  const Matrix g0 = inst.stacked_gradient(x0);
  CHECK((state.x + 0.2 * g0).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(state.k == 1);
}

TEST_CASE("doubly stochastic weights keep the scalars at one") {
  Matrix A(2, 2);
  A << 0.5, 0.5, 0.5, 0.5;
  const auto w = dextra::compile(dextra::make_tilde(A, 0.5));
  const auto inst = dextra::generate_least_squares(2, 2, 3, 0.1, 4);
  const auto state = dextra::init(inst, w, Matrix::Zero(2, 2), 0.1);
  CHECK((state.y - Vector::Ones(2)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("init matches the dense matrix oracle") {
  const auto pair = cycle_weights(3);
  const auto inst = dextra::generate_least_squares(3, 2, 4, 0.1, 6);
  Matrix x0(3, 2);
  x0 << 1, 2, -1, 0.5, 0, -2;
  const auto state = dextra::init(inst, dextra::compile(pair), x0, 0.15);
  const oracle::DenseNetwork ref(inst, pair.A, pair.A_tilde, 0.15, x0);
  CHECK((state.x - ref.x()).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((state.y - ref.y()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("init validates inputs") {
  const auto inst = dextra::generate_least_squares(3, 2, 4, 0.1, 2);
  const auto w = dextra::compile(cycle_weights(3));
  CHECK_THROWS_AS(dextra::init(inst, w, Matrix::Zero(3, 2), 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(dextra::init(inst, w, Matrix::Zero(2, 2), 0.1),
                  std::invalid_argument);
}

TEST_CASE("single agent runs plain gradient descent") {
  const auto inst = dextra::generate_least_squares(1, 3, 5, 0.2, 8);
  Matrix A(1, 1);
  A << 1.0;
  const auto w = dextra::compile(dextra::make_tilde(A, 0.5));
  const double alpha = 0.5 / inst.lipschitz(0);

  auto state = dextra::init(inst, w, Matrix::Zero(1, 3), alpha);
  Vector gd = Vector::Zero(3);
  gd -= alpha * inst.gradient(0, gd);
  for (int k = 1; k <= 200; ++k) {
    CHECK((state.z.row(0).transpose() - gd).cwiseAbs().maxCoeff() <= 1e-13);
    dextra::step(state, inst, w, alpha);
    gd -= alpha * inst.gradient(0, gd);
  }
}

TEST_CASE("reduces to the symmetric double-memory method when y stays one") {
  const Digraph g = symmetric_ring(6, 4, 3);
  const Matrix W = dextra::metropolis_weights(g);
  const auto pair = dextra::make_tilde(W, 0.5);
  const auto w = dextra::compile(pair);
  const auto inst = dextra::generate_least_squares(6, 3, 5, 0.1, 10);
  const double alpha = 0.3 / inst.lipschitz(0);

  auto state = dextra::init(inst, w, Matrix::Zero(6, 3), alpha);
  Matrix x = W * Matrix::Zero(6, 3) - alpha * inst.stacked_gradient(Matrix::Zero(6, 3));
  Matrix x_prev = Matrix::Zero(6, 3);
  Matrix grads_prev = inst.stacked_gradient(Matrix::Zero(6, 3));
  for (int k = 1; k <= 120; ++k) {
    CHECK((state.z - x).cwiseAbs().maxCoeff() <= 1e-12);
    const Matrix grads = inst.stacked_gradient(x);
    const Matrix x_next = dextra::extra_step(x, x_prev, grads, grads_prev, W,
                                             pair.A_tilde, alpha);
    x_prev = x;
    x = x_next;
    grads_prev = grads;
    dextra::step(state, inst, w, alpha);
  }
}

TEST_CASE("steps match the dense matrix oracle") {
  const auto pair = cycle_weights(3);
  const auto w = dextra::compile(pair);
  const auto inst = dextra::generate_least_squares(3, 2, 4, 0.1, 12);
  Matrix x0(3, 2);
  x0 << 0.3, -1, 2, 0.7, -0.4, 0.1;
  auto state = dextra::init(inst, w, x0, 0.1);
  oracle::DenseNetwork ref(inst, pair.A, pair.A_tilde, 0.1, x0);
  for (int k = 1; k <= 50; ++k) {
    dextra::step(state, inst, w, 0.1);
    ref.step();
    CHECK((state.x - ref.x()).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((state.y - ref.y()).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((state.z - ref.z()).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("mass conservation and scalar totals hold along a run") {
  const Digraph g = dextra::random_strongly_connected(8, 0.35, 15);
  const auto pair = dextra::make_tilde(dextra::local_degree_weights(g), 0.5);
  const auto inst = dextra::generate_least_squares(8, 3, 6, 0.1, 16);
  const Vector u = dextra::centralized_solve(inst);
  dextra::RunOptions opts;
  opts.max_iter = 2000;
  opts.target_residual = 1e-11;
  const auto trace = dextra::run(inst, dextra::compile(pair), 0.3, u, opts);
  CHECK(trace.max_conservation_defect() <= 1e-12);
  CHECK(trace.max_y_sum_defect() <= 1e-12);
}

TEST_CASE("network fixed point is stationary under the update") {
  const Digraph g = dextra::random_strongly_connected(6, 0.4, 18);
  const auto pair = dextra::make_tilde(dextra::local_degree_weights(g), 0.5);
  const auto info = dextra::stationary(pair.A);
  const auto inst = dextra::generate_least_squares(6, 3, 6, 0.05, 19);
  const Vector u = dextra::centralized_solve(inst);
  const auto w = dextra::compile(pair);

  dextra::NetworkState state;
  state.x = info.pi * u.transpose();
  state.x_prev = state.x;
  state.y = info.pi;
  state.z = Vector::Ones(6) * u.transpose();
  Matrix grad_star(6, 3);
  for (int i = 0; i < 6; ++i)
    grad_star.row(i) = inst.gradient(i, u).transpose();
  state.grad_prev = grad_star;
  state.k = 5;

  const Matrix x_before = state.x;
  dextra::step(state, inst, w, 0.2);
  CHECK((state.x - x_before).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((state.y - info.pi).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("neighbor sums equal dense products over a long run") {
  const Digraph g = dextra::random_strongly_connected(7, 0.3, 20);
  const auto pair = dextra::make_tilde(dextra::local_degree_weights(g), 0.4);
  const auto w = dextra::compile(pair);
  const auto inst = dextra::generate_least_squares(7, 2, 5, 0.1, 21);
  auto state = dextra::init(inst, w, Matrix::Zero(7, 2), 0.2);
  oracle::DenseNetwork ref(inst, pair.A, pair.A_tilde, 0.2, Matrix::Zero(7, 2));
  // The marginal mass mode integrates rounding differences, so the gap
  // grows linearly with the horizon; 200 rounds stays well under the
  // reordering tolerance.
  for (int k = 1; k <= 200; ++k) {
    dextra::step(state, inst, w, 0.2);
    ref.step();
  }
  CHECK((state.x - ref.x()).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("run terminates with the right reasons") {
  const Digraph g = dextra::random_strongly_connected(6, 0.4, 24);
  const auto pair = dextra::make_tilde(dextra::local_degree_weights(g), 0.5);
  const auto inst = dextra::generate_least_squares(6, 3, 8, 0.1, 25);
  const Vector u = dextra::centralized_solve(inst);
  const auto w = dextra::compile(pair);
  dextra::RunOptions opts;
  opts.max_iter = 60000;
  opts.target_residual = 1e-10;

  SUBCASE("sane step size converges") {
    const auto trace = dextra::run(inst, w, 0.3, u, opts);
    CHECK(trace.reason == dextra::StopReason::converged);
    CHECK(trace.final_residual() <= 1e-10);
    CHECK(trace.residuals.size() ==
          static_cast<std::size_t>(trace.iterations) + 1);
  }
  SUBCASE("oversized step size diverges") {
    const auto trace = dextra::run(inst, w, 40.0, u, opts);
    CHECK(trace.reason == dextra::StopReason::diverged);
  }
  SUBCASE("starting at the optimum is already converged") {
    dextra::RunOptions at_opt = opts;
    at_opt.x0 = Vector::Ones(6) * u.transpose();
    const auto trace = dextra::run(inst, w, 0.3, u, at_opt);
    CHECK(trace.reason == dextra::StopReason::converged);
    CHECK(trace.iterations == 0);
    CHECK(trace.residuals.front() <= 1e-12);
  }
  SUBCASE("snapshots follow the configured stride") {
    dextra::RunOptions with_snaps = opts;
    with_snaps.max_iter = 50;
    with_snaps.target_residual = 0.0;
    with_snaps.snapshot_stride = 10;
    const auto trace = dextra::run(inst, w, 0.3, u, with_snaps);
    CHECK(trace.snapshots.size() == 6);  // k = 0, 10, ..., 50
    CHECK(trace.snapshots.front() == Matrix::Zero(6, 3));
  }
}

TEST_CASE("runs are deterministic") {
  const Digraph g = dextra::random_strongly_connected(5, 0.4, 30);
  const auto pair = dextra::make_tilde(dextra::local_degree_weights(g), 0.5);
  const auto inst = dextra::generate_least_squares(5, 2, 4, 0.1, 31);
  const Vector u = dextra::centralized_solve(inst);
  dextra::RunOptions opts;
  opts.max_iter = 500;
  const auto a = dextra::run(inst, dextra::compile(pair), 0.25, u, opts);
  const auto b = dextra::run(inst, dextra::compile(pair), 0.25, u, opts);
  CHECK(a.residuals == b.residuals);
  CHECK(a.final_state.x == b.final_state.x);
}

TEST_CASE("residual metric") {
  Vector u(2);
  u << 1, -1;
  SUBCASE("zero at the target") {
    const Matrix z = Vector::Ones(3) * u.transpose();
    CHECK(dextra::residual(z, u) == 0.0);
  }
  SUBCASE("symmetric unit offsets average to one") {
    Matrix z(2, 2);
    Vector e(2);
    e << 0.6, 0.8;  // unit norm
    z.row(0) = (u + e).transpose();
    z.row(1) = (u - e).transpose();
    CHECK(dextra::residual(z, u) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("matches a naive per-agent loop") {
    dextra::Rng rng(5);
    Matrix z(6, 2);
    for (int i = 0; i < 6; ++i)
      for (int d = 0; d < 2; ++d) z(i, d) = rng.normal();
    double acc = 0.0;
    for (int i = 0; i < 6; ++i) {
      double sq = 0.0;
      for (int d = 0; d < 2; ++d) sq += (z(i, d) - u(d)) * (z(i, d) - u(d));
      acc += std::sqrt(sq);
    }
    CHECK(dextra::residual(z, u) == doctest::Approx(acc / 6.0).epsilon(1e-15));
  }
}
