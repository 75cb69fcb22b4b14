#include "fedgraph/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fedgraph/dataset.hpp"

namespace fedgraph {

void ExperimentConfig::validate() const {
  if (lambda < 0.0) throw std::invalid_argument("config: lambda must be >= 0");
  if (rounds < 1) throw std::invalid_argument("config: rounds must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("config: at least one seed required");
  if (hidden < 1) throw std::invalid_argument("config: hidden must be >= 1");
  if (heads < 1) throw std::invalid_argument("config: heads must be >= 1");
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  double dr = resolved_dropout();
  if (dr < 0.0 || dr >= 1.0) throw std::invalid_argument("config: dropout must be in [0,1)");
  if (resolved_lr() <= 0.0 && resolved_lr() != 0.0)
    throw std::invalid_argument("config: lr must be >= 0");
  if (weight_decay < 0.0) throw std::invalid_argument("config: weight_decay must be >= 0");
}

RunConfig ExperimentConfig::run_config(uint64_t seed) const {
  RunConfig rc;
  rc.model = model;
  rc.mode = mode;
  rc.lambda = lambda;
  rc.lr = resolved_lr();
  rc.weight_decay = weight_decay;
  rc.dropout = resolved_dropout();
  rc.hidden = hidden;
  rc.heads = heads;
  rc.rounds = rounds;
  rc.threads = threads;
  rc.seed = seed;
  return rc;
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream out;
  out << "dataset=" << dataset_dir << "\n";
  out << "model=" << to_string(model) << "\n";
  out << "mode=" << to_string(mode) << "\n";
  out << "lambda=" << format_double(lambda) << "\n";
  out << "rounds=" << rounds << "\n";
  out << "seeds=";
  for (std::size_t i = 0; i < seeds.size(); ++i) out << (i ? "," : "") << seeds[i];
  out << "\n";
  out << "lr=" << format_double(resolved_lr()) << "\n";
  out << "weight_decay=" << format_double(weight_decay) << "\n";
  out << "dropout=" << format_double(resolved_dropout()) << "\n";
  out << "hidden=" << hidden << "\n";
  out << "heads=" << heads << "\n";
  out << "threads=" << threads << "\n";
  out << "out=" << out_dir << "\n";
  return out.str();
}

namespace {

double parse_double(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  double d = 0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size()) throw std::invalid_argument("config: bad number for " + key + ": " + v);
  return d;
}

long parse_long(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  long d = 0;
  try {
    d = std::stol(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size()) throw std::invalid_argument("config: bad integer for " + key + ": " + v);
  return d;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key=value, got '" + line + "'");
    std::string key = line.substr(0, eq), val = line.substr(eq + 1);
    if (key == "dataset") {
      cfg.dataset_dir = val;
    } else if (key == "model") {
      cfg.model = model_from_string(val);
    } else if (key == "mode") {
      cfg.mode = mode_from_string(val);
    } else if (key == "lambda") {
      cfg.lambda = parse_double(val, key);
    } else if (key == "rounds") {
      cfg.rounds = static_cast<int>(parse_long(val, key));
    } else if (key == "seeds") {
      cfg.seeds.clear();
      std::istringstream ss(val);
      std::string tok;
      while (std::getline(ss, tok, ','))
        if (!tok.empty()) cfg.seeds.push_back(static_cast<uint64_t>(parse_long(tok, key)));
    } else if (key == "lr") {
      cfg.lr = parse_double(val, key);
    } else if (key == "weight_decay") {
      cfg.weight_decay = parse_double(val, key);
    } else if (key == "dropout") {
      cfg.dropout = parse_double(val, key);
    } else if (key == "hidden") {
      cfg.hidden = static_cast<int>(parse_long(val, key));
    } else if (key == "heads") {
      cfg.heads = static_cast<int>(parse_long(val, key));
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_long(val, key));
    } else if (key == "out") {
      cfg.out_dir = val;
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

}  // namespace fedgraph
