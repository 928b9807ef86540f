#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dextra/analysis.hpp"
#include "dextra/baselines.hpp"
#include "dextra/digraph.hpp"
#include "dextra/engine.hpp"
#include "dextra/io.hpp"
#include "dextra/objectives.hpp"
#include "dextra/weights.hpp"

namespace dextra {

struct GraphSpec {
  std::string kind = "random";  // random | balanced | file
  int n = 10;
  double extra_edge_prob = 0.3;
  int extra_cycles = 3;   // balanced generator only
  int max_cycle_len = 0;  // balanced generator only; 0 = n
  std::uint64_t seed = 1;
  std::string file;  // kind = file
};

struct WeightSpec {
  std::string strategy = "local-degree";  // local-degree | constant
  double zeta = 0.01;
  double theta = 0.5;
};

struct ObjectiveSpec {
  int p = 4;
  int m_each = 6;
  double noise_std = 0.1;
  std::uint64_t seed = 3;
  double target_lipschitz = 0.14;
};

struct RunSpec {
  std::vector<std::string> algorithms = {"dextra", "gradient-push", "dgd-row"};
  double alpha = 0.0;  // 0 = take the certificate's recommendation
  std::vector<double> alpha_grid;
  long max_iter = 5000;
  double target_residual = 1e-10;
  int snapshot_stride = 0;
};

struct CertifyConfig {
  double eta_fraction = 0.5;
  double delta_fraction = 0.5;
  int calibration_horizon = 500;
  double d_margin = 0.10;
  std::string d_mode = "calibration";  // calibration | analytic
};

struct ExperimentConfig {
  GraphSpec graph;
  WeightSpec weights;
  ObjectiveSpec objective;
  RunSpec run;
  CertifyConfig certify;
  std::string out_dir = "out";
};

ExperimentConfig config_from_sections(const io::Sections& sections);
ExperimentConfig load_config(const std::filesystem::path& file);
void validate(const ExperimentConfig& config);

/// Everything a command needs, fully materialized.
struct Workspace {
  Digraph graph;
  WeightPair weights;
  StationaryInfo info;
  LeastSquaresInstance instance;
  Vector u;
};

/// Deterministically regenerates the workspace from the config.
Workspace build_workspace(const ExperimentConfig& config);
/// Reads a previously generated workspace back from config.out_dir; throws
/// (naming the path) when files are missing.
Workspace load_workspace(const ExperimentConfig& config);

Matrix build_strategy_weights(const Digraph& g, const std::string& strategy,
                              double zeta);
CertifyOptions certify_options(const CertifyConfig& cfg);

void write_trace_csv(const std::filesystem::path& file, const RunTrace& trace);
void write_trace_manifest(const std::filesystem::path& file,
                          const RunTrace& trace, const std::string& algorithm,
                          const ExperimentConfig& config);
io::KeyValues certificate_report(const RateCertificate& cert,
                                 const ExperimentConfig& config);

/// Exit codes: 0 success, 1 usage/configuration error, 2 infeasible
/// certificate, 3 divergence in a primary run.
int cmd_generate(const ExperimentConfig& config);
int cmd_certify(const ExperimentConfig& config);
int cmd_run(const ExperimentConfig& config);
int cmd_compare(const ExperimentConfig& config);
int cmd_sweep(const ExperimentConfig& config);

}  // namespace dextra
