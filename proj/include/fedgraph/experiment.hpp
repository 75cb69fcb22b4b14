#pragma once

#include <string>
#include <vector>

#include "fedgraph/config.hpp"
#include "fedgraph/dataset.hpp"
#include "fedgraph/sim_types.hpp"

namespace fedgraph {

struct SeedRun {
  uint64_t seed = 0;
  std::vector<RoundTranscript> transcripts;
};

struct ExperimentResult {
  std::vector<SeedRun> runs;
  std::vector<RoundTranscript> mean;  // per-round metric means across seeds
  CommReport comm;
  double final_acc_mean = 0.0;  // seed-mean accuracy at the last round
  double best_acc_mean = 0.0;   // max over rounds of the seed-mean curve
  int best_round = 0;
};

/// Trains every seed, averages the curves and, when out_dir is set, writes
/// metrics_seed<k>.csv, metrics_mean.csv, comm.json, summary.txt, config.txt.
ExperimentResult run_experiment(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg, const Dataset& ds);

std::string metrics_csv(const std::vector<RoundTranscript>& rows);

struct SweepEntry {
  double lambda = 0.0;
  double final_acc_mean = 0.0;
  double best_acc_mean = 0.0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  double best_lambda = 0.0;  // highest seed-mean final accuracy
};

/// Runs the grid (deduplicated, with a warning on duplicates) and picks the
/// lambda with the best mean final accuracy.
SweepResult lambda_sweep(const ExperimentConfig& base, std::vector<double> grid);

/// The published search grids, keyed by dataset directory name; empty when
/// the dataset has no published grid.
std::vector<double> default_lambda_grid(const std::string& dataset_name);

}  // namespace fedgraph
