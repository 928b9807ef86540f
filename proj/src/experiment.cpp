#include "dextra/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "dextra/svg_plot.hpp"

namespace dextra {

namespace {

namespace fs = std::filesystem;

const std::map<std::string, std::string>* find_section(
    const io::Sections& sections, const std::string& name) {
  const auto it = sections.find(name);
  return it == sections.end() ? nullptr : &it->second;
}

template <class T>
void read_field(const std::map<std::string, std::string>* section,
                const std::string& key, T& out) {
  if (!section) return;
  const auto it = section->find(key);
  if (it == section->end()) return;
  if constexpr (std::is_same_v<T, std::string>) {
    out = it->second;
  } else if constexpr (std::is_same_v<T, int>) {
    out = std::stoi(it->second);
  } else if constexpr (std::is_same_v<T, long>) {
    out = std::stol(it->second);
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    out = std::stoull(it->second);
  } else if constexpr (std::is_same_v<T, double>) {
    out = std::stod(it->second);
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split_list(text)) out.push_back(std::stod(tok));
  return out;
}

std::optional<RateFit> fit_trace_tau(const RunTrace& trace) {
  std::vector<double> positive;
  for (double r : trace.residuals) {
    if (r <= 0.0) break;
    positive.push_back(r);
  }
  const int burn = static_cast<int>(positive.size() / 10);
  if (static_cast<int>(positive.size()) - burn < 10) return std::nullopt;
  return fit_linear_rate(positive, burn);
}

std::string reason_or_not_linear(const std::optional<RateFit>& fit) {
  if (!fit || !fit->r2_defined) return "not linear";
  if (fit->r_squared < 0.99 || fit->slope >= 0.0) return "not linear";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", fit->tau);
  return buf;
}

}  // namespace

ExperimentConfig config_from_sections(const io::Sections& sections) {
  ExperimentConfig cfg;
  const auto* graph = find_section(sections, "graph");
  read_field(graph, "kind", cfg.graph.kind);
  read_field(graph, "n", cfg.graph.n);
  read_field(graph, "extra_edge_prob", cfg.graph.extra_edge_prob);
  read_field(graph, "extra_cycles", cfg.graph.extra_cycles);
  read_field(graph, "max_cycle_len", cfg.graph.max_cycle_len);
  read_field(graph, "seed", cfg.graph.seed);
  read_field(graph, "file", cfg.graph.file);

  const auto* weights = find_section(sections, "weights");
  read_field(weights, "strategy", cfg.weights.strategy);
  read_field(weights, "zeta", cfg.weights.zeta);
  read_field(weights, "theta", cfg.weights.theta);

  const auto* objective = find_section(sections, "objective");
  read_field(objective, "p", cfg.objective.p);
  read_field(objective, "m_each", cfg.objective.m_each);
  read_field(objective, "noise_std", cfg.objective.noise_std);
  read_field(objective, "seed", cfg.objective.seed);
  read_field(objective, "target_lipschitz", cfg.objective.target_lipschitz);

  const auto* run = find_section(sections, "run");
  if (run) {
    if (run->count("algorithms"))
      cfg.run.algorithms = split_list(run->at("algorithms"));
    if (run->count("alpha_grid"))
      cfg.run.alpha_grid = parse_grid(run->at("alpha_grid"));
  }
  read_field(run, "alpha", cfg.run.alpha);
  read_field(run, "max_iter", cfg.run.max_iter);
  read_field(run, "target_residual", cfg.run.target_residual);
  read_field(run, "snapshot_stride", cfg.run.snapshot_stride);

  const auto* certify = find_section(sections, "certify");
  read_field(certify, "eta_fraction", cfg.certify.eta_fraction);
  read_field(certify, "delta_fraction", cfg.certify.delta_fraction);
  read_field(certify, "calibration_horizon", cfg.certify.calibration_horizon);
  read_field(certify, "d_margin", cfg.certify.d_margin);
  read_field(certify, "d_mode", cfg.certify.d_mode);

  const auto* output = find_section(sections, "output");
  read_field(output, "dir", cfg.out_dir);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  return config_from_sections(io::read_sections(file));
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.graph.kind != "random" && cfg.graph.kind != "balanced" &&
      cfg.graph.kind != "file")
    throw std::invalid_argument("unknown graph kind: " + cfg.graph.kind);
  if (cfg.graph.kind == "file" && cfg.graph.file.empty())
    throw std::invalid_argument("graph kind 'file' needs graph.file");
  if (cfg.graph.kind == "file" && !fs::exists(cfg.graph.file))
    throw std::invalid_argument("graph file not found: " + cfg.graph.file);
  if (cfg.graph.n < 1) throw std::invalid_argument("graph.n must be >= 1");
  if (cfg.weights.strategy != "local-degree" &&
      cfg.weights.strategy != "constant")
    throw std::invalid_argument("unknown weighting strategy: " +
                                cfg.weights.strategy);
  if (cfg.weights.theta <= 0.0 || cfg.weights.theta > 0.5)
    throw std::invalid_argument("weights.theta must lie in (0, 1/2]");
  if (cfg.objective.p < 1 || cfg.objective.m_each < cfg.objective.p)
    throw std::invalid_argument("objective needs m_each >= p >= 1");
  if (cfg.run.algorithms.empty())
    throw std::invalid_argument("run.algorithms must not be empty");
  for (const auto& name : cfg.run.algorithms) algorithm_from_string(name);
  for (double a : cfg.run.alpha_grid)
    if (a <= 0.0)
      throw std::invalid_argument("alpha grid entries must be positive");
  if (cfg.run.max_iter < 1)
    throw std::invalid_argument("run.max_iter must be >= 1");
  if (cfg.certify.d_mode != "calibration" && cfg.certify.d_mode != "analytic")
    throw std::invalid_argument("certify.d_mode must be calibration|analytic");
}

Matrix build_strategy_weights(const Digraph& g, const std::string& strategy,
                              double zeta) {
  if (strategy == "local-degree") return local_degree_weights(g);
  if (strategy == "constant") return constant_weights(g, zeta);
  throw std::invalid_argument("unknown weighting strategy: " + strategy);
}

CertifyOptions certify_options(const CertifyConfig& cfg) {
  CertifyOptions opts;
  opts.eta_fraction = cfg.eta_fraction;
  opts.delta_fraction = cfg.delta_fraction;
  opts.calibration_horizon = cfg.calibration_horizon;
  opts.d_margin = cfg.d_margin;
  opts.d_mode = cfg.d_mode == "analytic" ? DMode::analytic : DMode::calibration;
  return opts;
}

Workspace build_workspace(const ExperimentConfig& cfg) {
  validate(cfg);
  Digraph graph =
      cfg.graph.kind == "file"
          ? load_edge_list(cfg.graph.file)
          : cfg.graph.kind == "balanced"
                ? random_balanced_strongly_connected(
                      cfg.graph.n, cfg.graph.extra_cycles, cfg.graph.seed,
                      cfg.graph.max_cycle_len)
                : random_strongly_connected(
                      cfg.graph.n, cfg.graph.extra_edge_prob, cfg.graph.seed);
  const Matrix A =
      build_strategy_weights(graph, cfg.weights.strategy, cfg.weights.zeta);
  WeightPair weights = make_tilde(A, cfg.weights.theta);
  StationaryInfo info = stationary(A);

  LeastSquaresParams params;
  params.n = graph.size();
  params.p = cfg.objective.p;
  params.m_each = cfg.objective.m_each;
  params.noise_std = cfg.objective.noise_std;
  params.seed = cfg.objective.seed;
  params.target_lipschitz = cfg.objective.target_lipschitz;
  LeastSquaresInstance instance = generate_least_squares(params);
  Vector u = centralized_solve(instance);
  return Workspace{std::move(graph), std::move(weights), std::move(info),
                   std::move(instance), std::move(u)};
}

Workspace load_workspace(const ExperimentConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  Digraph graph = load_edge_list(dir / "graph.txt");
  const Matrix A = io::read_matrix_csv(dir / "A.csv");
  const auto manifest = io::read_key_values(dir / "manifest.txt");
  const double theta = std::stod(manifest.at("theta"));
  WeightPair weights;
  weights.A = A;
  weights.A_tilde = io::read_matrix_csv(dir / "A_tilde.csv");
  weights.theta = theta;
  StationaryInfo info = stationary(A);
  LeastSquaresInstance instance = load_instance(dir / "objective");
  Vector u = centralized_solve(instance);
  return Workspace{std::move(graph), std::move(weights), std::move(info),
                   std::move(instance), std::move(u)};
}

void write_trace_csv(const std::filesystem::path& file, const RunTrace& trace) {
  std::vector<double> iters(trace.residuals.size());
  for (std::size_t i = 0; i < iters.size(); ++i)
    iters[i] = static_cast<double>(i);
  io::write_csv_columns(file,
                        {"iter", "residual", "consensus_spread",
                         "conservation_defect"},
                        {iters, trace.residuals, trace.consensus_spreads,
                         trace.conservation_defects});
}

void write_trace_manifest(const std::filesystem::path& file,
                          const RunTrace& trace, const std::string& algorithm,
                          const ExperimentConfig& cfg) {
  io::KeyValues kv;
  kv.emplace_back("algorithm", algorithm);
  kv.emplace_back("alpha", io::format_double(trace.alpha));
  kv.emplace_back("graph_seed", std::to_string(cfg.graph.seed));
  kv.emplace_back("objective_seed", std::to_string(cfg.objective.seed));
  kv.emplace_back("weights_strategy", cfg.weights.strategy);
  kv.emplace_back("theta", io::format_double(cfg.weights.theta));
  kv.emplace_back("terminal_reason", to_string(trace.reason));
  kv.emplace_back("iterations", std::to_string(trace.iterations));
  kv.emplace_back("final_residual", io::format_double(trace.final_residual()));
  io::write_key_values(file, kv);
}

io::KeyValues certificate_report(const RateCertificate& cert,
                                 const ExperimentConfig& cfg) {
  io::KeyValues kv;
  kv.emplace_back("n", std::to_string(cert.n));
  kv.emplace_back("weights_strategy", cfg.weights.strategy);
  kv.emplace_back("theta", io::format_double(cfg.weights.theta));
  kv.emplace_back("L_f", io::format_double(cert.lipschitz));
  kv.emplace_back("S_f", io::format_double(cert.strong));
  kv.emplace_back("d", io::format_double(cert.dc.d));
  kv.emplace_back("d_minus", io::format_double(cert.dc.d_minus));
  kv.emplace_back("d_inf_minus", io::format_double(cert.dc.d_inf_minus));
  kv.emplace_back("d_mode", cert.dc.mode == DMode::analytic ? "analytic"
                                                            : "calibration");
  kv.emplace_back("d_margin", io::format_double(cert.d_margin));
  kv.emplace_back("d_horizon", std::to_string(cert.dc.horizon));
  kv.emplace_back("eta", io::format_double(cert.eta));
  kv.emplace_back("eta_sup", io::format_double(cert.eta_sup));
  kv.emplace_back("delta", io::format_double(cert.delta));
  kv.emplace_back("delta_sup", io::format_double(cert.delta_sup));
  kv.emplace_back("lambda_min_M_sym", io::format_double(cert.min_eig_M_sym));
  kv.emplace_back("positivity_ok", cert.positivity_ok ? "true" : "false");
  kv.emplace_back("gamma", io::format_double(cert.gamma));
  kv.emplace_back("C", io::format_double(cert.big_c));
  kv.emplace_back("c1", io::format_double(cert.constants.c1));
  kv.emplace_back("c2", io::format_double(cert.constants.c2));
  kv.emplace_back("c3", io::format_double(cert.constants.c3));
  kv.emplace_back("c4", io::format_double(cert.constants.c4));
  kv.emplace_back("c5", io::format_double(cert.constants.c5));
  kv.emplace_back("c6", io::format_double(cert.constants.c6));
  kv.emplace_back("c7", io::format_double(cert.constants.c7));
  kv.emplace_back("discriminant", io::format_double(cert.constants.discriminant));
  kv.emplace_back("alpha_lo_strict", io::format_double(cert.strict.alpha_lo));
  kv.emplace_back("alpha_hi_strict", io::format_double(cert.strict.alpha_hi));
  kv.emplace_back("feasible_strict", cert.strict.feasible ? "true" : "false");
  if (!cert.strict.feasible)
    kv.emplace_back("strict_diagnostic", cert.strict.diagnostic);
  kv.emplace_back("alpha_lo", io::format_double(cert.interval().alpha_lo));
  kv.emplace_back("alpha_hi", io::format_double(cert.interval().alpha_hi));
  kv.emplace_back("interval_source",
                  cert.strict.feasible ? "strict" : "estimated");
  kv.emplace_back("feasible", cert.feasible() ? "true" : "false");
  if (!cert.feasible() && !cert.estimated.feasible)
    kv.emplace_back("diagnostic", cert.estimated.diagnostic);
  kv.emplace_back("recommended_alpha",
                  io::format_double(cert.recommended_alpha()));
  return kv;
}

int cmd_generate(const ExperimentConfig& cfg) {
  const Workspace ws = build_workspace(cfg);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  save_edge_list(ws.graph, dir / "graph.txt");
  io::write_matrix_csv(dir / "A.csv", ws.weights.A);
  io::write_matrix_csv(dir / "A_tilde.csv", ws.weights.A_tilde);
  io::write_vector_csv(dir / "pi.csv", ws.info.pi);
  io::write_vector_csv(dir / "optimum.csv", ws.u);

  LeastSquaresParams params;
  params.n = ws.graph.size();
  params.p = cfg.objective.p;
  params.m_each = cfg.objective.m_each;
  params.noise_std = cfg.objective.noise_std;
  params.seed = cfg.objective.seed;
  params.target_lipschitz = cfg.objective.target_lipschitz;
  save_instance(ws.instance, dir / "objective", &params);

  io::KeyValues kv;
  kv.emplace_back("graph_kind", cfg.graph.kind);
  kv.emplace_back("n", std::to_string(ws.graph.size()));
  kv.emplace_back("graph_seed", std::to_string(cfg.graph.seed));
  kv.emplace_back("extra_edge_prob", io::format_double(cfg.graph.extra_edge_prob));
  kv.emplace_back("extra_cycles", std::to_string(cfg.graph.extra_cycles));
  kv.emplace_back("weights_strategy", cfg.weights.strategy);
  kv.emplace_back("zeta", io::format_double(cfg.weights.zeta));
  kv.emplace_back("theta", io::format_double(cfg.weights.theta));
  kv.emplace_back("p", std::to_string(cfg.objective.p));
  kv.emplace_back("m_each", std::to_string(cfg.objective.m_each));
  kv.emplace_back("noise_std", io::format_double(cfg.objective.noise_std));
  kv.emplace_back("objective_seed", std::to_string(cfg.objective.seed));
  kv.emplace_back("target_lipschitz",
                  io::format_double(cfg.objective.target_lipschitz));
  io::write_key_values(dir / "manifest.txt", kv);

  std::cout << "generated instance in " << dir.string() << " (n="
            << ws.graph.size() << ", edges=" << ws.graph.edges().size()
            << ")\n";
  return 0;
}

namespace {

RunOptions run_options(const ExperimentConfig& cfg) {
  RunOptions opts;
  opts.max_iter = cfg.run.max_iter;
  opts.target_residual = cfg.run.target_residual;
  opts.snapshot_stride = cfg.run.snapshot_stride;
  return opts;
}

}  // namespace

int cmd_certify(const ExperimentConfig& cfg) {
  const Workspace ws = load_workspace(cfg);
  const RateCertificate cert =
      certify_step_size(ws.instance, ws.weights, ws.info,
                        certify_options(cfg.certify));
  auto report = certificate_report(cert, cfg);
  const fs::path dir(cfg.out_dir);

  // Validate a run at the recommended step through the contraction
  // functional and attach the fitted rate to the certificate.
  if (cert.feasible()) {
    RunOptions opts = run_options(cfg);
    const LyapunovReport lyap =
        lyapunov_validate(ws.instance, ws.weights, ws.info, ws.u,
                          cert.recommended_alpha(), cert.delta, opts);
    report.emplace_back("lyapunov_applicable",
                        lyap.applicable ? "true" : "false");
    if (lyap.applicable) {
      report.emplace_back("lyapunov_min_seminorm",
                          io::format_double(lyap.min_seminorm));
      report.emplace_back("lyapunov_nonnegative",
                          lyap.seminorm_nonnegative ? "true" : "false");
      report.emplace_back("lyapunov_big_gamma_hat",
                          io::format_double(lyap.big_gamma_hat));
      report.emplace_back("gamma_hat_consensus",
                          io::format_double(lyap.gamma_hat));
      report.emplace_back("fitted_tau", io::format_double(lyap.dz_fit.tau));
      report.emplace_back("fitted_tau_r2",
                          io::format_double(lyap.dz_fit.r_squared));
      std::vector<double> iters(lyap.g_seminorm.size());
      for (std::size_t i = 0; i < iters.size(); ++i)
        iters[i] = static_cast<double>(i);
      io::write_csv_columns(dir / "lyapunov.csv",
                            {"iter", "g_seminorm", "dz_error_sq"},
                            {iters, lyap.g_seminorm, lyap.dz_error_sq});
    }
  }

  io::write_key_values(dir / "certificate.txt", report);
  {
    std::ofstream csv(dir / "certificate.csv");
    csv << "name,value\n";
    for (const auto& [k, v] : report) csv << k << "," << v << "\n";
  }
  for (const auto& [k, v] : report) std::cout << k << " = " << v << "\n";
  return cert.feasible() ? 0 : 2;
}

namespace {

RunTrace run_algorithm(const Workspace& ws, Algorithm algo, double alpha,
                       const RunOptions& opts) {
  switch (algo) {
    case Algorithm::dextra:
      return run(ws.instance, compile(ws.weights), alpha, ws.u, opts);
    case Algorithm::extra: {
      // Requires a symmetric doubly-stochastic matrix; extra_step validates.
      const Matrix W = ws.weights.A;
      const Matrix Wt = ws.weights.theta * Matrix::Identity(W.rows(), W.cols()) +
                        (1.0 - ws.weights.theta) * W;
      return run_extra(ws.instance, W, Wt, alpha, ws.u, opts);
    }
    case Algorithm::dgd_row:
      return run_dgd_row(ws.instance, row_stochastic_weights(ws.graph), alpha,
                         StepSchedule::inv_sqrt, ws.u, opts);
    case Algorithm::gradient_push:
      return run_gradient_push(ws.instance, ws.weights.A, alpha,
                               StepSchedule::inv_sqrt, ws.u, opts);
  }
  throw std::logic_error("unreachable");
}

double resolve_alpha(const ExperimentConfig& cfg, const Workspace& ws) {
  if (cfg.run.alpha > 0.0) return cfg.run.alpha;
  const RateCertificate cert = certify_step_size(
      ws.instance, ws.weights, ws.info, certify_options(cfg.certify));
  if (!cert.feasible())
    throw std::runtime_error(
        "no step size given and the certificate is infeasible; pass --alpha");
  return cert.recommended_alpha();
}

}  // namespace

int cmd_run(const ExperimentConfig& cfg) {
  const Workspace ws = load_workspace(cfg);
  const double alpha = resolve_alpha(cfg, ws);
  const Algorithm algo = algorithm_from_string(cfg.run.algorithms.front());
  const RunTrace trace = run_algorithm(ws, algo, alpha, run_options(cfg));
  const fs::path dir(cfg.out_dir);
  const std::string stem = "trace_" + to_string(algo);
  write_trace_csv(dir / (stem + ".csv"), trace);
  write_trace_manifest(dir / (stem + ".manifest.txt"), trace, to_string(algo),
                       cfg);
  std::cout << to_string(algo) << ": " << to_string(trace.reason) << " after "
            << trace.iterations << " iterations, residual "
            << io::format_double(trace.final_residual()) << "\n";
  if (algo == Algorithm::dextra && trace.reason == StopReason::diverged)
    return 3;
  return 0;
}

int cmd_compare(const ExperimentConfig& cfg) {
  const Workspace ws = load_workspace(cfg);
  const double alpha = resolve_alpha(cfg, ws);
  const RunOptions opts = run_options(cfg);
  const fs::path dir(cfg.out_dir);

  std::vector<plot::Series> curves;
  std::ostringstream table;
  table << "algorithm,final_residual,iterations,reason,tau\n";
  bool primary_diverged = false;

  for (const auto& name : cfg.run.algorithms) {
    const Algorithm algo = algorithm_from_string(name);
    std::string reason;
    try {
      const RunTrace trace = run_algorithm(ws, algo, alpha, opts);
      write_trace_csv(dir / ("trace_" + to_string(algo) + ".csv"), trace);
      write_trace_manifest(dir / ("trace_" + to_string(algo) + ".manifest.txt"),
                           trace, to_string(algo), cfg);
      plot::Series s;
      s.label = to_string(algo);
      for (std::size_t k = 0; k < trace.residuals.size(); ++k) {
        s.x.push_back(static_cast<double>(k));
        s.y.push_back(trace.residuals[k]);
      }
      curves.push_back(std::move(s));
      table << to_string(algo) << ","
            << io::format_double(trace.final_residual()) << ","
            << trace.iterations << "," << to_string(trace.reason) << ","
            << reason_or_not_linear(fit_trace_tau(trace)) << "\n";
      if (algo == Algorithm::dextra && trace.reason == StopReason::diverged)
        primary_diverged = true;
    } catch (const std::exception& e) {
      table << to_string(algo) << ",,,failed: " << e.what() << ",\n";
    }
  }

  plot::PlotSpec spec;
  spec.title = "residual vs iteration (alpha = " + io::format_double(alpha) + ")";
  plot::write_line_plot(dir / "compare.svg", spec, curves);
  std::ofstream summary(dir / "summary.csv");
  summary << table.str();
  std::cout << table.str();
  return primary_diverged ? 3 : 0;
}

int cmd_sweep(const ExperimentConfig& cfg) {
  if (cfg.run.alpha_grid.empty())
    throw std::invalid_argument("sweep needs run.alpha_grid / --alpha-grid");
  const Workspace ws = load_workspace(cfg);
  const RunOptions opts = run_options(cfg);
  const fs::path dir(cfg.out_dir);

  std::ofstream csv(dir / "sweep.csv");
  csv << "strategy,alpha,reason,iterations,final_residual,tau\n";

  for (const char* strategy : {"local-degree", "constant"}) {
    const Matrix A =
        build_strategy_weights(ws.graph, strategy, cfg.weights.zeta);
    const WeightPair pair = make_tilde(A, cfg.weights.theta);
    const StationaryInfo info = stationary(A);
    const CompiledWeights w = compile(pair);

    RateCertificate cert = certify_step_size(ws.instance, pair, info,
                                             certify_options(cfg.certify));
    std::vector<plot::Series> curves;
    double empirical_max = 0.0;
    for (double alpha : cfg.run.alpha_grid) {
      const RunTrace trace = run(ws.instance, w, alpha, ws.u, opts);
      if (trace.reason == StopReason::converged)
        empirical_max = std::max(empirical_max, alpha);
      csv << strategy << "," << io::format_double(alpha) << ","
          << to_string(trace.reason) << "," << trace.iterations << ","
          << io::format_double(trace.final_residual()) << ","
          << reason_or_not_linear(fit_trace_tau(trace)) << "\n";
      plot::Series s;
      s.label = "alpha=" + io::format_double(alpha) +
                (trace.reason == StopReason::diverged ? " (diverged)" : "");
      for (std::size_t k = 0; k < trace.residuals.size(); ++k) {
        s.x.push_back(static_cast<double>(k));
        s.y.push_back(trace.residuals[k]);
      }
      curves.push_back(std::move(s));
    }
    plot::PlotSpec spec;
    spec.title = std::string("step-size sweep, ") + strategy + " weights";
    plot::write_line_plot(dir / (std::string("sweep_") + strategy + ".svg"),
                          spec, curves);

    std::cout << strategy << ": empirical alpha_max = "
              << io::format_double(empirical_max) << "; certified interval ["
              << io::format_double(cert.interval().alpha_lo) << ", "
              << io::format_double(cert.interval().alpha_hi) << "] ("
              << (cert.feasible() ? "feasible" : "infeasible") << ")\n";
  }
  return 0;
}

}  // namespace dextra
