#pragma once

#include <cstdint>
#include <string>

namespace fedgraph {

/// Erdos-Renyi topology with planted class clusters, written in the dataset
/// directory layout: same-class pairs connect with probability p_edge and
/// cross-class pairs with p_edge * cross_fraction, and features are the class
/// mean plus Gaussian noise, so both the topology and the features carry the
/// class signal. label_fraction of the nodes (keyed shuffle) form the train
/// mask and the rest the test mask. Deterministic: identical spec, identical
/// bytes.
struct SynthSpec {
  uint64_t seed = 1;
  std::size_t n = 8;
  double p_edge = 0.1;
  std::size_t d = 4;
  std::size_t c = 2;
  double label_fraction = 0.1;
  double separation = 3.0;
  double noise = 0.3;
  double cross_fraction = 0.1;
};

void synth_graph(const SynthSpec& spec, const std::string& out_dir);

}  // namespace fedgraph
