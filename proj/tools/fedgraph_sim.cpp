// fedgraph-sim: run/one-off tooling for the node-level federated GNN
// simulator. Exit codes: 0 success, 2 configuration error, 3 divergence.

#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "fedgraph/config.hpp"
#include "fedgraph/dataset.hpp"
#include "fedgraph/experiment.hpp"
#include "fedgraph/federation.hpp"
#include "fedgraph/synth.hpp"

namespace {

struct CommonFlags {
  std::optional<std::string> config_path, dataset, model, mode, out;
  std::optional<double> lambda, lr, dropout, weight_decay;
  std::optional<int> rounds, hidden, heads, threads;
  std::vector<uint64_t> seeds;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "config file (key=value lines)");
  cmd->add_option("--dataset", f.dataset, "dataset directory");
  cmd->add_option("--model", f.model, "gcn|gat");
  cmd->add_option("--mode", f.mode, "nfedgnn|cnfgnn|centralized");
  cmd->add_option("--lambda", f.lambda, "regularization weight");
  cmd->add_option("--rounds", f.rounds, "communication rounds");
  cmd->add_option("--seed", f.seeds, "seed (repeatable)");
  cmd->add_option("--lr", f.lr, "learning rate");
  cmd->add_option("--dropout", f.dropout, "dropout rate");
  cmd->add_option("--weight-decay", f.weight_decay, "Adam weight decay");
  cmd->add_option("--hidden", f.hidden, "hidden width");
  cmd->add_option("--heads", f.heads, "attention heads (gat)");
  cmd->add_option("--threads", f.threads, "client-evaluation threads");
  cmd->add_option("--out", f.out, "output directory");
}

fedgraph::ExperimentConfig resolve(const CommonFlags& f) {
  fedgraph::ExperimentConfig cfg;
  if (f.config_path) cfg = fedgraph::ExperimentConfig::parse_file(*f.config_path);
  if (f.dataset) cfg.dataset_dir = *f.dataset;
  if (f.model) cfg.model = fedgraph::model_from_string(*f.model);
  if (f.mode) cfg.mode = fedgraph::mode_from_string(*f.mode);
  if (f.lambda) cfg.lambda = *f.lambda;
  if (f.rounds) cfg.rounds = *f.rounds;
  if (!f.seeds.empty()) cfg.seeds = f.seeds;
  if (f.lr) cfg.lr = *f.lr;
  if (f.dropout) cfg.dropout = *f.dropout;
  if (f.weight_decay) cfg.weight_decay = *f.weight_decay;
  if (f.hidden) cfg.hidden = *f.hidden;
  if (f.heads) cfg.heads = *f.heads;
  if (f.threads) cfg.threads = *f.threads;
  if (f.out) cfg.out_dir = *f.out;
  if (cfg.dataset_dir.empty())
    throw std::invalid_argument("no dataset: pass --dataset or set it in the config");
  cfg.validate();
  return cfg;
}

std::string dataset_basename(const std::string& dir) {
  std::string d = dir;
  while (!d.empty() && d.back() == '/') d.pop_back();
  auto slash = d.find_last_of('/');
  return slash == std::string::npos ? d : d.substr(slash + 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"node-level federated GNN training simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "train one experiment");
  add_common(run, run_flags);

  CommonFlags sweep_flags;
  std::string grid_arg;
  CLI::App* sweep = app.add_subcommand("sweep", "run a lambda grid and pick the best");
  add_common(sweep, sweep_flags);
  sweep->add_option("--grid", grid_arg, "comma-separated lambdas (default: published grid)");

  fedgraph::SynthSpec synth_spec;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--n", synth_spec.n, "node count")->required();
  synth->add_option("--p", synth_spec.p_edge, "edge probability")->required();
  synth->add_option("--d", synth_spec.d, "feature dimension")->required();
  synth->add_option("--c", synth_spec.c, "class count")->required();
  synth->add_option("--seed", synth_spec.seed, "seed");
  synth->add_option("--label-fraction", synth_spec.label_fraction, "train-mask fraction");
  synth->add_option("--separation", synth_spec.separation, "class mean scale");
  synth->add_option("--noise", synth_spec.noise, "feature noise sigma");
  synth->add_option("--cross-fraction", synth_spec.cross_fraction,
                    "cross-class edge probability scale");
  synth->add_option("--out", synth_out, "output directory")->required();

  CommonFlags comm_flags;
  CLI::App* comm = app.add_subcommand("comm", "communication-cost report, no training");
  add_common(comm, comm_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // help exits 0, everything else is a config error
  }

  try {
    if (run->parsed()) {
      fedgraph::ExperimentConfig cfg = resolve(run_flags);
      fedgraph::ExperimentResult res = fedgraph::run_experiment(cfg);
      std::cout << "final mean accuracy " << fedgraph::format_double(res.final_acc_mean)
                << ", best mean accuracy " << fedgraph::format_double(res.best_acc_mean)
                << " (round " << res.best_round << ")\n";
    } else if (sweep->parsed()) {
      fedgraph::ExperimentConfig cfg = resolve(sweep_flags);
      std::vector<double> grid;
      if (!grid_arg.empty()) {
        std::istringstream ss(grid_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok));
      } else {
        grid = fedgraph::default_lambda_grid(dataset_basename(cfg.dataset_dir));
        if (grid.empty())
          throw std::invalid_argument("no published grid for this dataset: pass --grid");
      }
      fedgraph::SweepResult res = fedgraph::lambda_sweep(cfg, grid);
      for (const auto& e : res.entries)
        std::cout << "lambda " << fedgraph::format_double(e.lambda) << ": final "
                  << fedgraph::format_double(e.final_acc_mean) << ", best "
                  << fedgraph::format_double(e.best_acc_mean) << "\n";
      std::cout << "best lambda: " << fedgraph::format_double(res.best_lambda) << "\n";
    } else if (synth->parsed()) {
      fedgraph::synth_graph(synth_spec, synth_out);
      std::cout << "wrote " << synth_out << "\n";
    } else if (comm->parsed()) {
      fedgraph::ExperimentConfig cfg = resolve(comm_flags);
      fedgraph::DatasetMeta meta = fedgraph::load_meta(cfg.dataset_dir);
      fedgraph::RunConfig rc = cfg.run_config(cfg.seeds.front());
      fedgraph::CommReport rep = fedgraph::comm_cost_report(rc, meta.n, meta.feature_dim);
      std::cout << rep.to_json();
    }
  } catch (const fedgraph::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
