#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedgraph/dense.hpp"

namespace fedgraph {

enum class Model { gcn, gat };
enum class Mode { nfedgnn, cnfgnn, centralized };

std::string to_string(Model m);
std::string to_string(Mode m);
Model model_from_string(const std::string& s);
Mode mode_from_string(const std::string& s);

/// Everything one training run needs. Defaults mirror the experiment recipe:
/// hidden 16, 8 attention heads, weight decay 5e-4, 200 rounds; learning rate
/// and dropout are resolved per model (gcn: 0.1 / 0.5, gat: 0.01 / 0.6).
struct RunConfig {
  Model model = Model::gcn;
  Mode mode = Mode::nfedgnn;
  double lambda = 0.0;
  double lr = 0.1;
  double weight_decay = 5e-4;
  double dropout = 0.5;
  int hidden = 16;
  int heads = 8;
  int rounds = 200;
  int threads = 1;
  uint64_t seed = 1;
  bool record_messages = false;  // materialize wire messages (tests only)
};

/// Per-round record: the unit of metering and logging. Byte counts follow the
/// 32-bit wire format (element count x 4) regardless of in-memory precision.
struct RoundTranscript {
  uint32_t round = 0;
  uint64_t latent_upload_bytes = 0;
  uint64_t grad_download_bytes = 0;
  uint64_t param_upload_bytes = 0;    // cnfgnn only
  uint64_t param_download_bytes = 0;  // cnfgnn broadcast
  double train_ce = 0.0;
  double train_reg = 0.0;
  double train_total = 0.0;
  double test_acc = 0.0;
};

/// Aggregated communication figures over a run, in MiB (2^20 bytes). The
/// headline table figure counts upload-direction traffic only: latents for
/// nfedgnn, latents plus user-model parameters for cnfgnn.
struct CommReport {
  std::string mode, model;
  std::size_t n = 0;
  std::size_t latent_dim = 0;
  std::size_t params_per_user = 0;
  int rounds = 0;
  double upload_mib = 0.0;
  double download_mib = 0.0;
  double table1_mib = 0.0;

  std::string to_json() const;
};

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void check_divergence(double loss, uint32_t round) {
  if (!(loss <= 1e6))
    throw DivergenceError("training diverged at round " + std::to_string(round) +
                          " (loss=" + std::to_string(loss) + ")");
}

/// Fraction of labeled mask nodes whose argmax row matches the label.
double masked_accuracy(const DenseMatrix& scores, std::span<const int32_t> labels,
                       std::span<const uint32_t> mask);

}  // namespace fedgraph
