#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fedgraph/sim_types.hpp"

namespace fedgraph {

/// Flat key=value experiment configuration; CLI flags override file values.
/// Learning rate and dropout default per model when left unset (gcn: 0.1 and
/// 0.5, gat: 0.01 and 0.6); everything else carries the experiment defaults.
struct ExperimentConfig {
  std::string dataset_dir;
  Model model = Model::gcn;
  Mode mode = Mode::nfedgnn;
  double lambda = 0.0;
  int rounds = 200;
  std::vector<uint64_t> seeds = {1, 2, 3};
  std::optional<double> lr;
  double weight_decay = 5e-4;
  std::optional<double> dropout;
  int hidden = 16;
  int heads = 8;
  int threads = 1;
  std::string out_dir;

  double resolved_lr() const { return lr ? *lr : (model == Model::gcn ? 0.1 : 0.01); }
  double resolved_dropout() const {
    return dropout ? *dropout : (model == Model::gcn ? 0.5 : 0.6);
  }

  void validate() const;  // lambda >= 0, rounds >= 1, seeds nonempty, ...
  RunConfig run_config(uint64_t seed) const;

  std::string serialize() const;
  static ExperimentConfig parse_text(const std::string& text);
  static ExperimentConfig parse_file(const std::string& path);
};

}  // namespace fedgraph
