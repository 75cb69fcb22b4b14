#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fedgraph/config.hpp"
#include "fedgraph/dataset.hpp"
#include "fedgraph/experiment.hpp"
#include "fedgraph/federation.hpp"
#include "fedgraph/synth.hpp"

using namespace fedgraph;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("config: defaults mirror the experiment recipe") {
  ExperimentConfig cfg;
  CHECK(cfg.rounds == 200);
  CHECK(cfg.seeds == std::vector<uint64_t>{1, 2, 3});
  CHECK(cfg.weight_decay == 5e-4);
  CHECK(cfg.hidden == 16);
  CHECK(cfg.heads == 8);
  CHECK(cfg.resolved_lr() == 0.1);
  CHECK(cfg.resolved_dropout() == 0.5);
  cfg.model = Model::gat;
  CHECK(cfg.resolved_lr() == 0.01);
  CHECK(cfg.resolved_dropout() == 0.6);
}

TEST_CASE("config: serialize -> parse -> serialize is byte-identical") {
  ExperimentConfig cfg;
  cfg.dataset_dir = "datasets/cora";
  cfg.model = Model::gat;
  cfg.mode = Mode::cnfgnn;
  cfg.lambda = 0.1;
  cfg.seeds = {7, 9};
  cfg.out_dir = "/tmp/x";
  std::string s1 = cfg.serialize();
  std::string s2 = ExperimentConfig::parse_text(s1).serialize();
  CHECK(s1 == s2);
  ExperimentConfig back = ExperimentConfig::parse_text(s1);
  CHECK(back.lambda == 0.1);
  CHECK(back.model == Model::gat);
  CHECK(back.mode == Mode::cnfgnn);
  CHECK(back.seeds == std::vector<uint64_t>{7, 9});
}

TEST_CASE("config: rejections") {
  CHECK_THROWS_AS(ExperimentConfig::parse_text("bogus_key=1\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse_text("lambda=abc\n"), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::parse_text("no equals sign"), std::invalid_argument);
  ExperimentConfig cfg;
  cfg.lambda = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.rounds = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.seeds.clear();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  // comments and blank lines are fine
  ExperimentConfig ok = ExperimentConfig::parse_text("# comment\n\nlambda=2\n");
  CHECK(ok.lambda == 2.0);
}

TEST_CASE("synth: deterministic output, p=0 edge case, degenerate configs") {
  std::string d1 = temp_dir("fedgraph_synth_a");
  std::string d2 = temp_dir("fedgraph_synth_b");
  SynthSpec spec{.seed = 9, .n = 8, .p_edge = 0.3, .d = 4, .c = 2, .label_fraction = 0.25};
  synth_graph(spec, d1);
  synth_graph(spec, d2);
  for (const char* f : {"meta.tsv", "edges.tsv", "features.tsv", "labels.tsv", "train.txt",
                        "test.txt"})
    CHECK(read_file(d1 + "/" + f) == read_file(d2 + "/" + f));

  std::string d3 = temp_dir("fedgraph_synth_c");
  synth_graph({.seed = 1, .n = 5, .p_edge = 0.0, .d = 2, .c = 2, .label_fraction = 0.4}, d3);
  CHECK(read_file(d3 + "/edges.tsv").empty());
  Dataset ds = load_dataset(d3);
  CHECK(ds.graph.edges.empty());
  CHECK(ds.graph.n == 5);

  CHECK_THROWS_AS(synth_graph({.seed = 1, .n = 3, .p_edge = 0.5, .d = 2, .c = 5}, d3),
                  std::invalid_argument);
  CHECK_THROWS_AS(synth_graph({.seed = 1, .n = 3, .p_edge = 1.5, .d = 2, .c = 2}, d3),
                  std::invalid_argument);
}

TEST_CASE("dataset loader rejects malformed feature files") {
  std::string dir = temp_dir("fedgraph_badds");
  synth_graph({.seed = 2, .n = 4, .p_edge = 0.5, .d = 3, .c = 2, .label_fraction = 0.5}, dir);
  {
    std::ofstream f(dir + "/features.tsv");
    f << "0.5 0.5 0.5\n0.5 0.5\n0.5 0.5 0.5\n0.5 0.5 0.5\n";
  }
  CHECK_THROWS_AS(load_dataset(dir), std::runtime_error);
  {
    std::ofstream f(dir + "/features.tsv");
    f << "0.5 0.5 0.5\n";
  }
  CHECK_THROWS_AS(load_dataset(dir), std::runtime_error);
}

TEST_CASE("run_experiment writes one csv row per round per seed") {
  std::string data = temp_dir("fedgraph_exp_data");
  synth_graph({.seed = 4, .n = 6, .p_edge = 0.5, .d = 3, .c = 2, .label_fraction = 0.5}, data);
  std::string out = temp_dir("fedgraph_exp_out");

  ExperimentConfig cfg;
  cfg.dataset_dir = data;
  cfg.rounds = 1;
  cfg.seeds = {7};
  cfg.threads = 1;
  cfg.out_dir = out;
  ExperimentResult res = run_experiment(cfg);
  CHECK(res.runs.size() == 1);
  std::string csv = read_file(out + "/metrics_seed7.csv");
  CHECK(csv.substr(0, csv.find('\n')) == "round,train_ce,train_reg,train_total,test_acc");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);  // header + one data row
  CHECK(std::filesystem::exists(out + "/metrics_mean.csv"));
  CHECK(std::filesystem::exists(out + "/comm.json"));
  CHECK(std::filesystem::exists(out + "/summary.txt"));
  CHECK(std::filesystem::exists(out + "/config.txt"));
}

TEST_CASE("rerunning an experiment reproduces metrics byte for byte") {
  std::string data = temp_dir("fedgraph_rerun_data");
  synth_graph({.seed = 5, .n = 8, .p_edge = 0.4, .d = 4, .c = 2, .label_fraction = 0.5}, data);

  ExperimentConfig cfg;
  cfg.dataset_dir = data;
  cfg.rounds = 4;
  cfg.seeds = {1, 2};

  std::string out1 = temp_dir("fedgraph_rerun_1");
  cfg.out_dir = out1;
  run_experiment(cfg);
  std::string out2 = temp_dir("fedgraph_rerun_2");
  cfg.out_dir = out2;
  cfg.threads = 3;  // thread count must not leak into the numbers
  run_experiment(cfg);
  for (const char* f : {"metrics_seed1.csv", "metrics_seed2.csv", "metrics_mean.csv"})
    CHECK(read_file(out1 + "/" + f) == read_file(out2 + "/" + f));
}

TEST_CASE("centralized mode flows through the harness") {
  std::string data = temp_dir("fedgraph_central_data");
  synth_graph({.seed = 6, .n = 8, .p_edge = 0.4, .d = 4, .c = 2, .label_fraction = 0.5}, data);
  ExperimentConfig cfg;
  cfg.dataset_dir = data;
  cfg.mode = Mode::centralized;
  cfg.rounds = 3;
  cfg.seeds = {1};
  ExperimentResult res = run_experiment(cfg);
  CHECK(res.mean.size() == 3);
  CHECK(res.comm.table1_mib == 0.0);
  for (const auto& tr : res.runs[0].transcripts) CHECK(tr.train_reg == 0.0);
}

TEST_CASE("lambda sweep: grid {0} equals a single lambda=0 run; duplicates dedup") {
  std::string data = temp_dir("fedgraph_sweep_data");
  synth_graph({.seed = 7, .n = 8, .p_edge = 0.4, .d = 4, .c = 2, .label_fraction = 0.5}, data);
  ExperimentConfig cfg;
  cfg.dataset_dir = data;
  cfg.rounds = 2;
  cfg.seeds = {1};

  SweepResult sweep = lambda_sweep(cfg, {0.0, 0.0});
  CHECK(sweep.entries.size() == 1);
  CHECK(sweep.best_lambda == 0.0);

  ExperimentConfig single = cfg;
  single.lambda = 0.0;
  ExperimentResult res = run_experiment(single);
  CHECK(sweep.entries[0].final_acc_mean == res.final_acc_mean);

  CHECK_THROWS_AS(lambda_sweep(cfg, {}), std::invalid_argument);
  CHECK_THROWS_AS(lambda_sweep(cfg, {-1.0}), std::invalid_argument);
}

TEST_CASE("published lambda grids") {
  CHECK(default_lambda_grid("cora") == std::vector<double>{0.1, 1, 10, 100, 300});
  CHECK(default_lambda_grid("Citeseer") == std::vector<double>{0.1, 1, 10, 100, 300});
  CHECK(default_lambda_grid("wiki-cs") == std::vector<double>{1, 10, 100, 500});
  CHECK(default_lambda_grid("squirrel") == std::vector<double>{1, 10, 100, 500});
  CHECK(default_lambda_grid("unknown").empty());
}

TEST_CASE("comm report fields") {
  RunConfig cfg;
  cfg.model = Model::gcn;
  cfg.mode = Mode::nfedgnn;
  cfg.rounds = 200;
  cfg.hidden = 16;
  CommReport rep = comm_cost_report(cfg, 3327, 3703);
  CHECK(rep.latent_dim == 16);
  CHECK(rep.params_per_user == 3703 * 16);
  // Citeseer GCN upload figure
  CHECK(std::round(rep.table1_mib * 100.0) / 100.0 == doctest::Approx(40.61));
  std::string json = rep.to_json();
  CHECK(json.find("\"table1_MiB\"") != std::string::npos);
  CHECK(json.find("\"mode\": \"nfedgnn\"") != std::string::npos);
}
