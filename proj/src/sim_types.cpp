#include "fedgraph/sim_types.hpp"

#include <algorithm>

#include <json.hpp>

namespace fedgraph {

std::string to_string(Model m) { return m == Model::gcn ? "gcn" : "gat"; }

std::string to_string(Mode m) {
  switch (m) {
    case Mode::nfedgnn: return "nfedgnn";
    case Mode::cnfgnn: return "cnfgnn";
    case Mode::centralized: return "centralized";
  }
  return "nfedgnn";
}

Model model_from_string(const std::string& s) {
  if (s == "gcn") return Model::gcn;
  if (s == "gat") return Model::gat;
  throw std::invalid_argument("unknown model '" + s + "' (expected gcn|gat)");
}

Mode mode_from_string(const std::string& s) {
  if (s == "nfedgnn") return Mode::nfedgnn;
  if (s == "cnfgnn") return Mode::cnfgnn;
  if (s == "centralized") return Mode::centralized;
  throw std::invalid_argument("unknown mode '" + s +
                              "' (expected nfedgnn|cnfgnn|centralized)");
}

double masked_accuracy(const DenseMatrix& scores, std::span<const int32_t> labels,
                       std::span<const uint32_t> mask) {
  std::size_t correct = 0, counted = 0;
  for (uint32_t i : mask) {
    if (i >= scores.rows) throw std::invalid_argument("masked_accuracy: node out of range");
    if (labels[i] < 0) continue;  // unlabeled eval nodes are skipped
    auto row = scores.row(i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < row.size(); ++j)
      if (row[j] > row[best]) best = j;
    correct += best == static_cast<std::size_t>(labels[i]);
    ++counted;
  }
  return counted == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(counted);
}

std::string CommReport::to_json() const {
  nlohmann::ordered_json j;
  j["mode"] = mode;
  j["model"] = model;
  j["n"] = n;
  j["latent_dim"] = latent_dim;
  j["params_per_user"] = params_per_user;
  j["rounds"] = rounds;
  j["upload_MiB"] = upload_mib;
  j["download_MiB"] = download_mib;
  j["table1_MiB"] = table1_mib;
  return j.dump(2) + "\n";
}

}  // namespace fedgraph
