#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "dextra/experiment.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string out;
  double alpha = -1.0;
  std::string alpha_grid;
  std::string algos;
  long long seed = -1;
  long long max_iter = -1;
  double target = -1.0;
};

void add_common(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config, "experiment config file");
  cmd->add_option("--out", ov.out, "output directory");
  cmd->add_option("--alpha", ov.alpha, "step size");
  cmd->add_option("--alpha-grid", ov.alpha_grid,
                  "comma-separated step sizes for sweeps");
  cmd->add_option("--algo", ov.algos, "comma-separated algorithm list");
  cmd->add_option("--seed", ov.seed, "graph and objective seed");
  cmd->add_option("--max-iter", ov.max_iter, "iteration budget");
  cmd->add_option("--target", ov.target, "target residual");
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

dextra::ExperimentConfig make_config(const Overrides& ov) {
  dextra::ExperimentConfig cfg;
  if (!ov.config.empty()) cfg = dextra::load_config(ov.config);
  if (!ov.out.empty()) cfg.out_dir = ov.out;
  if (ov.alpha > 0.0) cfg.run.alpha = ov.alpha;
  if (!ov.alpha_grid.empty()) {
    cfg.run.alpha_grid.clear();
    for (const auto& tok : split_list(ov.alpha_grid))
      cfg.run.alpha_grid.push_back(std::stod(tok));
  }
  if (!ov.algos.empty()) cfg.run.algorithms = split_list(ov.algos);
  if (ov.seed >= 0) {
    cfg.graph.seed = static_cast<std::uint64_t>(ov.seed);
    cfg.objective.seed = static_cast<std::uint64_t>(ov.seed);
  }
  if (ov.max_iter > 0) cfg.run.max_iter = ov.max_iter;
  if (ov.target > 0.0) cfg.run.target_residual = ov.target;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed optimization simulator for directed graphs"};
  app.require_subcommand(1);

  Overrides ov;
  CLI::App* generate = app.add_subcommand(
      "generate", "materialize graph, weights and objective on disk");
  CLI::App* certify =
      app.add_subcommand("certify", "compute the step-size certificate");
  CLI::App* run = app.add_subcommand("run", "run a single algorithm");
  CLI::App* compare =
      app.add_subcommand("compare", "run the configured algorithm list");
  CLI::App* sweep =
      app.add_subcommand("sweep", "step-size sensitivity over a grid");
  for (CLI::App* cmd : {generate, certify, run, compare, sweep})
    add_common(cmd, ov);

  CLI11_PARSE(app, argc, argv);

  try {
    const dextra::ExperimentConfig cfg = make_config(ov);
    if (generate->parsed()) return dextra::cmd_generate(cfg);
    if (certify->parsed()) return dextra::cmd_certify(cfg);
    if (run->parsed()) return dextra::cmd_run(cfg);
    if (compare->parsed()) return dextra::cmd_compare(cfg);
    if (sweep->parsed()) return dextra::cmd_sweep(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
