#include "dextra/objectives.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dextra/io.hpp"
#include "dextra/rng.hpp"

namespace dextra {

Matrix ObjectiveSuite::stacked_gradient(const Matrix& z) const {
  Matrix g(agents(), dim());
  for (int i = 0; i < agents(); ++i)
    g.row(i) = gradient(i, z.row(i).transpose()).transpose();
  return g;
}

std::pair<double, double> estimate_constants(const ObjectiveSuite& suite) {
  double l = 0.0;
  double s = std::numeric_limits<double>::infinity();
  for (int i = 0; i < suite.agents(); ++i) {
    l = std::max(l, suite.lipschitz(i));
    s = std::min(s, suite.strong_convexity(i));
  }
  return {l, s};
}

LeastSquaresInstance::LeastSquaresInstance(std::vector<Matrix> H,
                                           std::vector<Vector> h,
                                           Vector x_true)
    : H_(std::move(H)), h_(std::move(h)), x_true_(std::move(x_true)) {
  if (H_.empty() || H_.size() != h_.size())
    throw std::invalid_argument("per-agent data sizes disagree");
  const int p = static_cast<int>(x_true_.size());
  lipschitz_.reserve(H_.size());
  strong_.reserve(H_.size());
  for (std::size_t i = 0; i < H_.size(); ++i) {
    if (H_[i].cols() != p || H_[i].rows() != h_[i].size())
      throw std::invalid_argument("agent " + std::to_string(i) +
                                  " has inconsistent dimensions");
    Eigen::SelfAdjointEigenSolver<Matrix> es(H_[i].transpose() * H_[i]);
    lipschitz_.push_back(2.0 * es.eigenvalues().maxCoeff());
    strong_.push_back(2.0 * es.eigenvalues().minCoeff());
  }
}

double LeastSquaresInstance::value(int agent, const Vector& x) const {
  return (H_[agent] * x - h_[agent]).squaredNorm();
}

Vector LeastSquaresInstance::gradient(int agent, const Vector& x) const {
  return 2.0 * H_[agent].transpose() * (H_[agent] * x - h_[agent]);
}

bool LeastSquaresInstance::operator==(const LeastSquaresInstance& o) const {
  if (H_.size() != o.H_.size() || x_true_ != o.x_true_) return false;
  for (std::size_t i = 0; i < H_.size(); ++i)
    if (H_[i] != o.H_[i] || h_[i] != o.h_[i]) return false;
  return true;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, int attempt) {
  return seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(attempt);
}

}  // namespace

LeastSquaresInstance generate_least_squares(const LeastSquaresParams& params) {
  if (params.n < 1 || params.p < 1 || params.m_each < params.p)
    throw std::invalid_argument("need n >= 1 and m_each >= p >= 1");
  if (params.noise_std < 0.0)
    throw std::invalid_argument("noise_std must be nonnegative");
  if (params.target_lipschitz <= 0.0)
    throw std::invalid_argument("target_lipschitz must be positive");

  for (int attempt = 0; attempt < 10; ++attempt) {
    Rng rng(mix_seed(params.seed, attempt));
    Vector x_true(params.p);
    for (int d = 0; d < params.p; ++d) x_true(d) = rng.normal();

    std::vector<Matrix> H(params.n);
    for (int i = 0; i < params.n; ++i) {
      H[i].resize(params.m_each, params.p);
      for (int r = 0; r < params.m_each; ++r)
        for (int c = 0; c < params.p; ++c) H[i](r, c) = rng.normal();
    }

    double raw_lipschitz = 0.0;
    double min_eig = std::numeric_limits<double>::infinity();
    for (const auto& Hi : H) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(Hi.transpose() * Hi);
      raw_lipschitz = std::max(raw_lipschitz, 2.0 * es.eigenvalues().maxCoeff());
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
    if (min_eig <= 1e-10 * std::max(1.0, raw_lipschitz)) continue;

    const double scale = std::sqrt(params.target_lipschitz / raw_lipschitz);
    std::vector<Vector> h(params.n);
    for (int i = 0; i < params.n; ++i) {
      H[i] *= scale;
      h[i] = H[i] * x_true;
      for (int r = 0; r < params.m_each; ++r)
        h[i](r) += params.noise_std * rng.normal();
    }
    return LeastSquaresInstance(std::move(H), std::move(h), std::move(x_true));
  }
  throw std::runtime_error(
      "least squares generation kept producing rank-deficient blocks");
}

LeastSquaresInstance generate_least_squares(int n, int p, int m_each,
                                            double noise_std,
                                            std::uint64_t seed) {
  LeastSquaresParams params;
  params.n = n;
  params.p = p;
  params.m_each = m_each;
  params.noise_std = noise_std;
  params.seed = seed;
  return generate_least_squares(params);
}

Vector centralized_solve(const LeastSquaresInstance& inst) {
  const int p = inst.dim();
  Matrix gram = Matrix::Zero(p, p);
  Vector rhs = Vector::Zero(p);
  for (int i = 0; i < inst.agents(); ++i) {
    gram += inst.data_matrix(i).transpose() * inst.data_matrix(i);
    rhs += inst.data_matrix(i).transpose() * inst.data_vector(i);
  }
  Eigen::LDLT<Matrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("aggregated normal matrix is singular");
  const Vector u = ldlt.solve(rhs);

  Vector grad_sum = Vector::Zero(p);
  for (int i = 0; i < inst.agents(); ++i) grad_sum += inst.gradient(i, u);
  if (grad_sum.norm() > 1e-10 * (1.0 + u.norm()))
    throw std::runtime_error(
        "normal equations solve left a large residual gradient; the "
        "aggregated system is near-singular");
  return u;
}

void save_instance(const LeastSquaresInstance& inst,
                   const std::filesystem::path& dir,
                   const LeastSquaresParams* provenance) {
  std::filesystem::create_directories(dir);
  io::KeyValues kv;
  kv.emplace_back("n", std::to_string(inst.agents()));
  kv.emplace_back("p", std::to_string(inst.dim()));
  std::string ms;
  for (int i = 0; i < inst.agents(); ++i) {
    if (i) ms += ",";
    ms += std::to_string(inst.data_matrix(i).rows());
  }
  kv.emplace_back("m_i", ms);
  if (provenance) {
    kv.emplace_back("seed", std::to_string(provenance->seed));
    kv.emplace_back("noise_std", io::format_double(provenance->noise_std));
    kv.emplace_back("target_lipschitz",
                    io::format_double(provenance->target_lipschitz));
  }
  io::write_key_values(dir / "manifest.txt", kv);
  for (int i = 0; i < inst.agents(); ++i) {
    io::write_matrix_csv(dir / ("H_" + std::to_string(i) + ".csv"),
                         inst.data_matrix(i));
    io::write_vector_csv(dir / ("h_" + std::to_string(i) + ".csv"),
                         inst.data_vector(i));
  }
  io::write_vector_csv(dir / "x_true.csv", inst.x_true());
}

LeastSquaresInstance load_instance(const std::filesystem::path& dir) {
  const auto kv = io::read_key_values(dir / "manifest.txt");
  const int n = std::stoi(kv.at("n"));
  std::vector<Matrix> H(n);
  std::vector<Vector> h(n);
  for (int i = 0; i < n; ++i) {
    H[i] = io::read_matrix_csv(dir / ("H_" + std::to_string(i) + ".csv"));
    h[i] = io::read_vector_csv(dir / ("h_" + std::to_string(i) + ".csv"));
  }
  Vector x_true = io::read_vector_csv(dir / "x_true.csv");
  return LeastSquaresInstance(std::move(H), std::move(h), std::move(x_true));
}

}  // namespace dextra
