#include <doctest.h>

#include <cmath>

#include "dextra/analysis.hpp"
#include "oracles.hpp"

using dextra::Digraph;
using dextra::Matrix;
using dextra::MatrixSet;
using dextra::Vector;

namespace {

struct Setup {
  dextra::WeightPair pair;
  dextra::StationaryInfo info;
};

Setup local_degree_setup(int n, double prob, std::uint64_t seed,
                         double theta = 0.5) {
  const Digraph g = dextra::random_strongly_connected(n, prob, seed);
  auto pair = dextra::make_tilde(dextra::local_degree_weights(g), theta);
  auto info = dextra::stationary(pair.A);
  return {std::move(pair), std::move(info)};
}

}  // namespace

TEST_CASE("matrix set of the identity network is trivial") {
  dextra::WeightPair pair;
  pair.A = Matrix::Identity(3, 3);
  pair.A_tilde = pair.A;
  pair.theta = 0.5;
  dextra::StationaryInfo info;
  info.pi = Vector::Ones(3);
  const MatrixSet ms = dextra::build_matrix_set(pair, info);
  CHECK(ms.N.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ms.Q.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ms.P.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ms.L.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ms.R.cwiseAbs().maxCoeff() == 0.0);
  CHECK((ms.M - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(ms.positivity_ok);
}

TEST_CASE("matrix set algebraic identities") {
  const auto [pair, info] = local_degree_setup(7, 0.35, 60);
  const MatrixSet ms = dextra::build_matrix_set(pair, info);

  // L = theta * P and R = I + A - 2 A_tilde entrywise.
  CHECK((ms.L - pair.theta * ms.P).cwiseAbs().maxCoeff() <= 1e-14);
  const Matrix r_direct = Matrix::Identity(7, 7) + pair.A - 2.0 * pair.A_tilde;
  CHECK((ms.R - r_direct).cwiseAbs().maxCoeff() <= 1e-14);
  // At theta = 1/2 the two-step memory cancels: R = 0.
  CHECK(ms.R.cwiseAbs().maxCoeff() <= 1e-14);

  // N + N^T is PSD.
  CHECK(ms.min_eig_N_sym >= -1e-10);

  // N + N^T equals the scaled directed-Laplacian symmetrization.
  const Matrix d_half = info.pi.cwiseSqrt().asDiagonal();
  const Matrix d_half_inv = info.pi.cwiseSqrt().cwiseInverse().asDiagonal();
  const Matrix eye = Matrix::Identity(7, 7);
  const Matrix laplacian =
      0.5 * (d_half * (eye - pair.A.transpose()) * d_half_inv +
             d_half_inv * (eye - pair.A) * d_half);
  const Matrix rhs = 2.0 * pair.theta * d_half_inv * laplacian * d_half_inv;
  CHECK((ms.N + ms.N.transpose() - rhs).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("theta below one half leaves a nonzero two-step term") {
  const auto [pair, info] = local_degree_setup(5, 0.4, 61, 0.3);
  const MatrixSet ms = dextra::build_matrix_set(pair, info);
  CHECK((ms.L - 0.3 * ms.P).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(ms.R.cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("positivity eigenvalue agrees with the weights-module check") {
  const auto [pair, info] = local_degree_setup(3, 0.0, 7);
  const MatrixSet ms = dextra::build_matrix_set(pair, info);
  const auto chk = dextra::check_scaled_positivity(pair, info);
  CHECK(ms.min_eig_M_sym == doctest::Approx(chk.min_eigenvalue).epsilon(1e-10));
  const Matrix sym = ms.M + ms.M.transpose();
  const auto ev = oracle::jacobi_eigenvalues(sym);
  CHECK(ms.min_eig_M_sym == doctest::Approx(ev.front()).epsilon(1e-10));
}

TEST_CASE("scale factors of the push-sum diagonal") {
  SUBCASE("doubly stochastic network has unit factors") {
    Matrix A(2, 2);
    A << 0.5, 0.5, 0.5, 0.5;
    const auto info = dextra::stationary(A);
    const auto dc = dextra::estimate_d_constants(A, info, 100,
                                                 dextra::DMode::calibration);
    CHECK(dc.d == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dc.d_minus == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dc.d_inf_minus == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("single agent") {
    Matrix A(1, 1);
    A << 1.0;
    const auto info = dextra::stationary(A);
    const auto dc =
        dextra::estimate_d_constants(A, info, 10, dextra::DMode::calibration);
    CHECK(dc.d == 1.0);
    CHECK(dc.d_minus == 1.0);
    CHECK(dc.d_inf_minus == 1.0);
  }
  SUBCASE("matches a brute-force scan of the scalar trace") {
    const auto [pair, info] = local_degree_setup(3, 0.0, 7);
    const auto ys = dextra::y_calibration_trace(pair.A, 500);
    double hi = 0.0, lo = 1e300;
    for (const auto& y : ys) {
      hi = std::max(hi, y.maxCoeff());
      lo = std::min(lo, y.minCoeff());
    }
    const auto dc = dextra::estimate_d_constants(pair.A, info, 500,
                                                 dextra::DMode::calibration);
    CHECK(dc.d == doctest::Approx(hi).epsilon(1e-14));
    CHECK(dc.d_minus == doctest::Approx(1.0 / lo).epsilon(1e-14));
    CHECK(dc.d_inf_minus ==
          doctest::Approx(1.0 / info.min_pi()).epsilon(1e-14));
  }
  SUBCASE("analytic mode dominates the calibration values") {
    const auto [pair, info] = local_degree_setup(6, 0.3, 62);
    const auto cal = dextra::estimate_d_constants(pair.A, info, 400,
                                                  dextra::DMode::calibration);
    const auto ana = dextra::estimate_d_constants(pair.A, info, 400,
                                                  dextra::DMode::analytic);
    CHECK(ana.d >= cal.d);
    CHECK(ana.d_minus >= cal.d_minus - 1e-12);
    CHECK(ana.mode == dextra::DMode::analytic);
  }
  SUBCASE("empty trace is rejected") {
    dextra::StationaryInfo info;
    info.pi = Vector::Ones(2);
    CHECK_THROWS_AS(dextra::d_constants_from_trace({}, info),
                    std::invalid_argument);
  }
}

TEST_CASE("certificate constants") {
  SUBCASE("vanishing N zeroes the spectral-ratio chain") {
    MatrixSet ms;
    const int n = 3;
    ms.M = Matrix::Identity(n, n);
    ms.N = Matrix::Zero(n, n);
    ms.Q = ms.P = ms.R = Matrix::Zero(n, n);
    ms.L = Matrix::Identity(n, n) -
           Matrix::Constant(n, n, 1.0 / n);  // lambda_tilde_min = 1
    ms.min_eig_M_sym = 2.0;
    ms.max_eig_M_sym = 2.0;
    ms.max_eig_MMt = 1.0;
    ms.max_eig_NNt = 0.0;
    ms.max_eig_N_sym = 0.0;
    ms.max_eig_RtR = 0.0;
    ms.max_eig_AtildeT_Atilde = 1.0;
    ms.norm_I_plus_A = 2.0;
    ms.norm_A_tilde = 1.0;
    ms.lambda_tilde_min_LtL = 1.0;
    dextra::DConstants dc;  // all ones
    const auto c =
        dextra::compute_constants(ms, dc, 1.0, 0.5, 0.1, 0.5, 0.1);
    CHECK(c.c2 == 0.0);
    CHECK(c.c4 == 0.0);
  }
  SUBCASE("violated parameter bounds are named") {
    const auto [pair, info] = local_degree_setup(5, 0.4, 63);
    const MatrixSet ms = dextra::build_matrix_set(pair, info);
    dextra::DConstants dc;
    dc.d_inf_minus = 1.0 / info.min_pi();
    try {
      dextra::compute_constants(ms, dc, 1.0, 0.5, 1e9, 1e-4, 0.1);
      FAIL("eta bound not enforced");
    } catch (const dextra::ParameterBound& e) {
      CHECK(e.parameter == "eta");
    }
    try {
      dextra::compute_constants(ms, dc, 1.0, 0.5, 1e-6, 1e9, 0.1);
      FAIL("delta bound not enforced");
    } catch (const dextra::ParameterBound& e) {
      CHECK(e.parameter == "delta");
    }
  }
  SUBCASE("straight-from-formula recomputation matches") {
    const auto [pair, info] = local_degree_setup(3, 0.0, 7);
    const MatrixSet ms = dextra::build_matrix_set(pair, info);
    const auto dc = dextra::estimate_d_constants(pair.A, info, 500,
                                                 dextra::DMode::calibration);
    const double lipschitz = 0.9, strong = 0.4;
    const double eta = 0.5 * dextra::eta_upper_bound(dc, lipschitz, strong);
    const double delta = 0.5 * dextra::delta_upper_bound(ms);
    const double alpha = 0.07;
    const auto c = dextra::compute_constants(ms, dc, lipschitz, strong, eta,
                                             delta, alpha);

    // Independent recomputation, term by term, straight from definitions.
    const int n = 3;
    auto spectral = [](const Matrix& m) {
      return std::sqrt(oracle::jacobi_eigenvalues(m.transpose() * m).back());
    };
    const Matrix eye = Matrix::Identity(n, n);
    const double c1 = dc.d_minus * (dc.d * spectral(eye + pair.A) +
                                    dc.d * spectral(pair.A_tilde) +
                                    2.0 * alpha * lipschitz);
    const auto nnt = oracle::jacobi_eigenvalues(ms.N * ms.N.transpose());
    const auto nsym = oracle::jacobi_eigenvalues(ms.N + ms.N.transpose());
    const auto ltl = oracle::jacobi_eigenvalues(ms.L.transpose() * ms.L);
    double ltl_min_nz = 0.0;
    for (double ev : ltl)
      if (ev > 1e-11) {
        ltl_min_nz = ev;
        break;
      }
    const double c2 = (nnt.back() + nsym.back()) / (2.0 * ltl_min_nz);
    const double coupling = dc.d_inf_minus * dc.d_minus * lipschitz;
    const double c3 =
        alpha * (4.0 * n) * (4.0 * n) *
        (c1 * c1 / (2.0 * eta) + coupling * coupling * (eta + 1.0 / eta) +
         strong / (dc.d * dc.d));
    const double c4 = 8.0 * c2 * (lipschitz * dc.d_minus) *
                      (lipschitz * dc.d_minus);
    const auto msym = oracle::jacobi_eigenvalues(ms.M + ms.M.transpose());
    const auto rtr = oracle::jacobi_eigenvalues(ms.R.transpose() * ms.R);
    const double c5 = 0.5 * msym.back() + 4.0 * c2 * rtr.back();
    const double c6 =
        0.5 * (strong / (dc.d * dc.d) - eta - 2.0 * eta * coupling * coupling);
    const auto mmt = oracle::jacobi_eigenvalues(ms.M * ms.M.transpose());
    const auto ata =
        oracle::jacobi_eigenvalues(pair.A_tilde.transpose() * pair.A_tilde);
    const double c7 = 0.5 * mmt.back() + 4.0 * c2 * ata.back();
    const double disc = c6 * c6 - 4.0 * c4 * delta * (1.0 / delta + c5 * delta);

    const double tol = 1e-12;
    CHECK(c.c1 == doctest::Approx(c1).epsilon(tol));
    CHECK(c.c2 == doctest::Approx(c2).epsilon(1e-9));
    CHECK(c.c3 == doctest::Approx(c3).epsilon(1e-9));
    CHECK(c.c4 == doctest::Approx(c4).epsilon(1e-9));
    CHECK(c.c5 == doctest::Approx(c5).epsilon(1e-9));
    CHECK(c.c6 == doctest::Approx(c6).epsilon(tol));
    CHECK(c.c7 == doctest::Approx(c7).epsilon(1e-9));
    CHECK(c.discriminant == doctest::Approx(disc).epsilon(1e-9));
  }
}

TEST_CASE("step-size interval") {
  SUBCASE("degenerate discriminant collapses to a point") {
    // Synthetic constants: c4 = 1, delta = 1, c6 = 2, c5 = 0 gives a zero
    // discriminant and the double root c6 / (2 c4 delta) = 1.
    const double c4 = 1.0, delta = 1.0, c6 = 2.0, c5 = 0.0;
    const double disc = c6 * c6 - 4.0 * c4 * delta * (1.0 / delta + c5 * delta);
    CHECK(disc == 0.0);
    const double root = (c6 - std::sqrt(disc)) / (2.0 * c4 * delta);
    CHECK(root == 1.0);
  }
  SUBCASE("estimated endpoints match a by-hand recomputation") {
    const Digraph g = dextra::random_balanced_strongly_connected(10, 20, 1, 2);
    const auto pair = dextra::make_tilde(dextra::constant_weights(g, 0.08), 0.5);
    const auto info = dextra::stationary(pair.A);
    const MatrixSet ms = dextra::build_matrix_set(pair, info);
    const auto dc = dextra::estimate_d_constants(pair.A, info, 500,
                                                 dextra::DMode::calibration);
    const auto inst = dextra::generate_least_squares(10, 4, 32, 0.1, 1001);
    const auto [lf, sf] = dextra::estimate_constants(inst);
    const double eta = 0.5 * dextra::eta_upper_bound(dc, lf, sf);
    const double delta = 0.5 * dextra::delta_upper_bound(ms);
    const auto est =
        dextra::estimated_step_size_interval(ms, dc, lf, sf, eta, delta);
    REQUIRE(est.feasible);

    const double coupling = dc.d_inf_minus * dc.d_minus * lf;
    const double hi = eta * ms.min_eig_M_sym / (2.0 * coupling * coupling);
    const double c2 = (ms.max_eig_NNt + ms.max_eig_N_sym) /
                      (2.0 * ms.lambda_tilde_min_LtL);
    const double lo = (sf / (2.0 * dc.d * dc.d) - eta / 2.0) / (2.0 * c2 * delta);
    CHECK(est.alpha_hi == doctest::Approx(hi).epsilon(1e-12));
    CHECK(est.alpha_lo == doctest::Approx(lo).epsilon(1e-12));
  }
  SUBCASE("realizable networks report an infeasible exact window") {
    const auto [pair, info] = local_degree_setup(6, 0.4, 64);
    const MatrixSet ms = dextra::build_matrix_set(pair, info);
    const auto dc = dextra::estimate_d_constants(pair.A, info, 500,
                                                 dextra::DMode::calibration);
    const auto inst = dextra::generate_least_squares(6, 3, 8, 0.1, 65);
    const auto [lf, sf] = dextra::estimate_constants(inst);
    const double eta = 0.5 * dextra::eta_upper_bound(dc, lf, sf);
    const double delta = 0.5 * dextra::delta_upper_bound(ms);
    const auto interval =
        dextra::step_size_interval(ms, dc, lf, sf, eta, delta);
    CHECK_FALSE(interval.feasible);
    CHECK(interval.diagnostic.find("discriminant") != std::string::npos);
  }
}

TEST_CASE("diagonal dominance widens the positivity margin") {
  // Smaller zeta moves A_tilde toward the identity, which must not shrink
  // lambda_min(M + M^T).
  for (std::uint64_t seed = 70; seed < 75; ++seed) {
    const Digraph g = dextra::random_strongly_connected(8, 0.3, seed);
    double prev = -1e300;
    for (double zeta : {0.05, 0.02, 0.01, 0.005}) {
      const auto pair = dextra::make_tilde(dextra::constant_weights(g, zeta), 0.5);
      const auto info = dextra::stationary(pair.A);
      const MatrixSet ms = dextra::build_matrix_set(pair, info);
      CHECK(ms.min_eig_M_sym >= prev - 1e-9);
      prev = ms.min_eig_M_sym;
    }
  }
}

TEST_CASE("linear rate fitting") {
  SUBCASE("exact geometric series") {
    std::vector<double> series;
    double v = 3.0;
    for (int k = 0; k < 60; ++k) {
      series.push_back(v);
      v *= 0.9;
    }
    const auto fit = dextra::fit_linear_rate(series, 0);
    CHECK(fit.tau == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.r2_defined);
  }
  SUBCASE("constant series is flagged") {
    const std::vector<double> series(30, 2.5);
    const auto fit = dextra::fit_linear_rate(series, 0);
    CHECK(fit.tau == doctest::Approx(1.0));
    CHECK_FALSE(fit.r2_defined);
  }
  SUBCASE("non-positive entries name the index") {
    std::vector<double> series{1.0, 0.5, 0.0, 0.25};
    try {
      dextra::fit_linear_rate(series, 0);
      FAIL("accepted a zero entry");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
  }
}

TEST_CASE("contraction functional replay") {
  SUBCASE("starting at the optimum leaves nothing to measure") {
    // Noiseless data puts every agent's own optimum at u, and the balanced
    // graph keeps the scalars at one, so the seeded state is a true fixed
    // point of the whole update.
    const Digraph g = dextra::random_balanced_strongly_connected(5, 4, 80, 2);
    const auto pair = dextra::make_tilde(dextra::constant_weights(g, 0.05), 0.5);
    const auto info = dextra::stationary(pair.A);
    const auto inst = dextra::generate_least_squares(5, 2, 6, 0.0, 81);
    const Vector u = dextra::centralized_solve(inst);
    dextra::RunOptions opts;
    opts.max_iter = 50;
    opts.target_residual = 1e-10;
    opts.x0 = Vector::Ones(5) * u.transpose();
    const auto rep =
        dextra::lyapunov_validate(inst, pair, info, u, 0.1, 1e-3, opts);
    CHECK(rep.applicable);
    for (double s : rep.g_seminorm) CHECK(std::abs(s) <= 1e-18);
  }
  SUBCASE("a run that never converges is reported inapplicable") {
    const auto [pair, info] = local_degree_setup(5, 0.4, 83);
    const auto inst = dextra::generate_least_squares(5, 2, 6, 0.1, 84);
    const Vector u = dextra::centralized_solve(inst);
    dextra::RunOptions opts;
    opts.max_iter = 20;  // far too few rounds
    opts.target_residual = 1e-10;
    const auto rep =
        dextra::lyapunov_validate(inst, pair, info, u, 0.05, 1e-3, opts);
    CHECK_FALSE(rep.applicable);
    CHECK(rep.run_reason == dextra::StopReason::iteration_budget);
  }
  SUBCASE("single agent reduces to weighted gradient-descent error") {
    Matrix A(1, 1);
    A << 1.0;
    const auto pair = dextra::make_tilde(A, 0.5);
    const auto info = dextra::stationary(pair.A);
    const auto inst = dextra::generate_least_squares(1, 2, 4, 0.1, 82);
    const Vector u = dextra::centralized_solve(inst);
    const double alpha = 0.3 / inst.lipschitz(0);
    dextra::RunOptions opts;
    opts.max_iter = 400;
    opts.target_residual = 1e-12;
    const auto rep =
        dextra::lyapunov_validate(inst, pair, info, u, alpha, 1e-3, opts);
    CHECK(rep.applicable);
    // With n = 1 the functional is ||x^k - u||^2 (M = 1, N = 0); cross-check
    // against a scalar gradient-descent replay.
    Vector x = Vector::Zero(2);
    for (std::size_t k = 0; k < rep.g_seminorm.size(); ++k) {
      CHECK(rep.g_seminorm[k] ==
            doctest::Approx((x - u).squaredNorm()).epsilon(1e-10));
      x -= alpha * inst.gradient(0, x);
    }
    // Strictly decreasing for a small step on a quadratic.
    for (std::size_t k = 1; k < rep.g_seminorm.size(); ++k)
      CHECK(rep.g_seminorm[k] <= rep.g_seminorm[k - 1] + 1e-18);
  }
}
