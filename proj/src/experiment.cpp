#include "fedgraph/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fedgraph/federation.hpp"
#include "fedgraph/gat.hpp"
#include "fedgraph/gcn.hpp"

namespace fedgraph {

std::string metrics_csv(const std::vector<RoundTranscript>& rows) {
  std::ostringstream out;
  out << "round,train_ce,train_reg,train_total,test_acc\n";
  for (const RoundTranscript& r : rows)
    out << r.round << "," << format_double(r.train_ce) << "," << format_double(r.train_reg)
        << "," << format_double(r.train_total) << "," << format_double(r.test_acc) << "\n";
  return out.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

std::vector<RoundTranscript> run_one_seed(const ExperimentConfig& cfg, const Dataset& ds,
                                          uint64_t seed) {
  RunConfig rc = cfg.run_config(seed);
  if (cfg.mode == Mode::centralized)
    return cfg.model == Model::gcn ? train_centralized_gcn(ds.graph, ds.features, rc)
                                   : train_centralized_gat(ds.graph, ds.features, rc);
  Simulation sim(ds.graph, ds.features, rc);
  return sim.train();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  return run_experiment(cfg, load_dataset(cfg.dataset_dir));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Dataset& ds) {
  cfg.validate();
  ExperimentResult res;
  for (uint64_t seed : cfg.seeds) res.runs.push_back({seed, run_one_seed(cfg, ds, seed)});

  std::size_t rounds = res.runs.front().transcripts.size();
  res.mean.resize(rounds);
  double inv = 1.0 / static_cast<double>(res.runs.size());
  for (std::size_t t = 0; t < rounds; ++t) {
    RoundTranscript& m = res.mean[t];
    m = res.runs.front().transcripts[t];  // byte counts are seed-invariant
    m.train_ce = m.train_reg = m.train_total = m.test_acc = 0.0;
    for (const SeedRun& run : res.runs) {
      m.train_ce += run.transcripts[t].train_ce;
      m.train_reg += run.transcripts[t].train_reg;
      m.train_total += run.transcripts[t].train_total;
      m.test_acc += run.transcripts[t].test_acc;
    }
    m.train_ce *= inv;
    m.train_reg *= inv;
    m.train_total *= inv;
    m.test_acc *= inv;
  }

  res.final_acc_mean = res.mean.back().test_acc;
  auto best = std::max_element(res.mean.begin(), res.mean.end(),
                               [](const RoundTranscript& a, const RoundTranscript& b) {
                                 return a.test_acc < b.test_acc;
                               });
  res.best_acc_mean = best->test_acc;
  res.best_round = static_cast<int>(best->round);

  RunConfig rc = cfg.run_config(cfg.seeds.front());
  res.comm = comm_cost_report(rc, ds.graph.n, ds.features.cols,
                              &res.runs.front().transcripts);

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    auto at = [&](const std::string& f) { return cfg.out_dir + "/" + f; };
    for (const SeedRun& run : res.runs)
      write_file(at("metrics_seed" + std::to_string(run.seed) + ".csv"),
                 metrics_csv(run.transcripts));
    write_file(at("metrics_mean.csv"), metrics_csv(res.mean));
    write_file(at("comm.json"), res.comm.to_json());
    write_file(at("config.txt"), cfg.serialize());

    std::ostringstream s;
    s << "dataset: " << cfg.dataset_dir << "\n"
      << "model: " << to_string(cfg.model) << "  mode: " << to_string(cfg.mode)
      << "  lambda: " << format_double(cfg.lambda) << "\n"
      << "rounds: " << cfg.rounds << "  lr: " << format_double(cfg.resolved_lr())
      << "  dropout: " << format_double(cfg.resolved_dropout())
      << "  weight_decay: " << format_double(cfg.weight_decay) << "\n";
    for (const SeedRun& run : res.runs) {
      double best_seed = 0.0;
      for (const RoundTranscript& tr : run.transcripts)
        best_seed = std::max(best_seed, tr.test_acc);
      s << "seed " << run.seed << ": final acc " << format_double(run.transcripts.back().test_acc)
        << ", best acc " << format_double(best_seed) << "\n";
    }
    s << "mean final accuracy: " << format_double(res.final_acc_mean) << "\n"
      << "best mean accuracy: " << format_double(res.best_acc_mean) << " (round "
      << res.best_round << ")\n"
      << "communication (table figure): " << format_double(res.comm.table1_mib) << " MiB\n";
    write_file(at("summary.txt"), s.str());
  }
  return res;
}

std::vector<double> default_lambda_grid(const std::string& dataset_name) {
  std::string name;
  for (char ch : dataset_name) name += static_cast<char>(std::tolower(ch));
  if (name == "cora" || name == "citeseer" || name == "pubmed")
    return {0.1, 1.0, 10.0, 100.0, 300.0};
  if (name == "chameleon" || name == "squirrel" || name == "wiki-cs" || name == "wikics")
    return {1.0, 10.0, 100.0, 500.0};
  return {};
}

SweepResult lambda_sweep(const ExperimentConfig& base, std::vector<double> grid) {
  if (grid.empty()) throw std::invalid_argument("lambda_sweep: empty grid");
  for (double l : grid)
    if (l < 0.0) throw std::invalid_argument("lambda_sweep: lambda must be >= 0");
  std::vector<double> uniq;
  for (double l : grid) {
    if (std::find(uniq.begin(), uniq.end(), l) != uniq.end()) {
      std::cerr << "lambda_sweep: dropping duplicate lambda " << format_double(l) << "\n";
      continue;
    }
    uniq.push_back(l);
  }

  Dataset ds = load_dataset(base.dataset_dir);
  SweepResult res;
  for (double l : uniq) {
    ExperimentConfig cfg = base;
    cfg.lambda = l;
    if (!base.out_dir.empty())
      cfg.out_dir = base.out_dir + "/lambda-" + format_double(l);
    ExperimentResult r = run_experiment(cfg, ds);
    res.entries.push_back({l, r.final_acc_mean, r.best_acc_mean});
  }
  auto best = std::max_element(res.entries.begin(), res.entries.end(),
                               [](const SweepEntry& a, const SweepEntry& b) {
                                 return a.final_acc_mean < b.final_acc_mean;
                               });
  res.best_lambda = best->lambda;

  if (!base.out_dir.empty()) {
    std::ostringstream s;
    s << "lambda,final_acc_mean,best_acc_mean\n";
    for (const SweepEntry& e : res.entries)
      s << format_double(e.lambda) << "," << format_double(e.final_acc_mean) << ","
        << format_double(e.best_acc_mean) << "\n";
    s << "best_lambda," << format_double(res.best_lambda) << "\n";
    std::filesystem::create_directories(base.out_dir);
    std::ofstream f(base.out_dir + "/sweep_summary.csv", std::ios::binary);
    f << s.str();
  }
  return res;
}

}  // namespace fedgraph
