#include "fedgraph/synth.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "fedgraph/dataset.hpp"
#include "fedgraph/rng.hpp"

namespace fedgraph {

void synth_graph(const SynthSpec& spec, const std::string& out_dir) {
  if (spec.n == 0 || spec.n > 10000)
    throw std::invalid_argument("synth_graph: n must be in [1, 10000]");
  if (spec.c == 0 || spec.c > spec.n)
    throw std::invalid_argument("synth_graph: need 1 <= c <= n");
  if (spec.d == 0) throw std::invalid_argument("synth_graph: d must be >= 1");
  if (spec.p_edge < 0.0 || spec.p_edge > 1.0)
    throw std::invalid_argument("synth_graph: p_edge must be in [0,1]");
  if (spec.label_fraction <= 0.0 || spec.label_fraction > 1.0)
    throw std::invalid_argument("synth_graph: label_fraction must be in (0,1]");
  if (spec.cross_fraction < 0.0 || spec.cross_fraction > 1.0)
    throw std::invalid_argument("synth_graph: cross_fraction must be in [0,1]");

  uint64_t key_e = rng::chain(spec.seed, "synth.edges");
  uint64_t key_c = rng::chain(spec.seed, "synth.classes");
  uint64_t key_m = rng::chain(spec.seed, "synth.means");
  uint64_t key_x = rng::chain(spec.seed, "synth.noise");
  uint64_t key_s = rng::chain(spec.seed, "synth.split");

  std::vector<std::size_t> cls(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i)
    cls[i] = std::min(spec.c - 1,
                      static_cast<std::size_t>(rng::uniform(key_c, i) * static_cast<double>(spec.c)));

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (spec.p_edge > 0.0) {
    for (std::size_t i = 0; i < spec.n; ++i)
      for (std::size_t j = i + 1; j < spec.n; ++j) {
        double p = cls[i] == cls[j] ? spec.p_edge : spec.p_edge * spec.cross_fraction;
        if (rng::uniform(key_e, i * spec.n + j) < p) edges.emplace_back(i, j);
      }
  }

  std::vector<double> means(spec.c * spec.d);
  for (std::size_t k = 0; k < means.size(); ++k)
    means[k] = spec.separation * rng::normal(key_m, k);

  // keyed shuffle: sort nodes by a per-node hash, take the head as train mask
  std::vector<std::size_t> order(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    uint64_t ha = rng::bits(key_s, a), hb = rng::bits(key_s, b);
    return ha != hb ? ha < hb : a < b;
  });
  std::size_t n_train = std::max<std::size_t>(
      1, static_cast<std::size_t>(spec.label_fraction * static_cast<double>(spec.n)));
  n_train = std::min(n_train, spec.n);
  std::vector<std::size_t> train(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> test(order.begin() + n_train, order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());

  std::filesystem::create_directories(out_dir);
  auto open = [&](const char* name) {
    std::ofstream f(out_dir + "/" + name);
    if (!f) throw std::runtime_error("synth_graph: cannot write " + out_dir + "/" + name);
    return f;
  };

  {
    auto f = open("meta.tsv");
    f << spec.n << "\t" << spec.d << "\t" << spec.c << "\n";
  }
  {
    auto f = open("edges.tsv");
    for (auto [u, v] : edges) f << u << "\t" << v << "\n";
  }
  {
    auto f = open("features.tsv");
    for (std::size_t i = 0; i < spec.n; ++i) {
      for (std::size_t j = 0; j < spec.d; ++j) {
        double v = means[cls[i] * spec.d + j] + spec.noise * rng::normal(key_x, i * spec.d + j);
        f << (j ? " " : "") << format_double(v);
      }
      f << "\n";
    }
  }
  {
    auto f = open("labels.tsv");
    for (std::size_t i = 0; i < spec.n; ++i) f << cls[i] << "\n";
  }
  {
    auto f = open("train.txt");
    for (std::size_t i : train) f << i << "\n";
  }
  {
    auto f = open("test.txt");
    for (std::size_t i : test) f << i << "\n";
  }
}

}  // namespace fedgraph
