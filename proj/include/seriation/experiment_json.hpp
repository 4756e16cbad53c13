#ifndef SERIATION_EXPERIMENT_JSON_HPP
#define SERIATION_EXPERIMENT_JSON_HPP

// JSON mapping for ExperimentConfig. Keys mirror the struct fields:
//
//   {
//     "grid": [[n, m], ...],            // or omit and use "rules"
//     "rules": ["m=n^1/2", "m=n", "m=n^3/2"],
//     "n_points": 30, "n_min": 10, "n_max": 1024,
//     "replications": 10,
//     "generator": {"family": "random-k-blocks", "blocks": 5, "path": ""},
//     "noise": {"kind": "gaussian", "sigma": 1.0},
//     "methods": ["rankscore", "oracle"],
//     "shape": "monotone",
//     "tau": 6.0, "tau_rule_c": 1.0,    // tau_rule_c overrides tau
//     "exhaustive_cap": 8,
//     "seed": 1, "timing": false, "threads": 0,
//     "out_path": "results.csv"
//   }
//
// Every key is optional; missing keys keep the ExperimentConfig defaults.

#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "seriation/experiment.hpp"

namespace seriation {

inline ShapeSpec parse_shape(const std::string& name) {
  if (name == "monotone") return ShapeSpec::monotone();
  if (name == "unimodal") return ShapeSpec::unimodal();
  throw std::invalid_argument("unknown shape '" + name + "' (expected monotone or unimodal)");
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  if (j.contains("grid")) {
    for (const auto& cell : j.at("grid")) {
      if (!cell.is_array() || cell.size() != 2) {
        throw std::invalid_argument("config: grid entries must be [n, m] pairs");
      }
      cfg.grid.push_back({cell[0].get<std::size_t>(), cell[1].get<std::size_t>()});
    }
  }
  if (j.contains("rules")) {
    cfg.rules.clear();
    const auto& r = j.at("rules");
    if (r.is_string()) {
      cfg.rules.push_back(parse_rule(r.get<std::string>()));
    } else {
      for (const auto& name : r) cfg.rules.push_back(parse_rule(name.get<std::string>()));
    }
  }
  cfg.n_points = j.value("n_points", cfg.n_points);
  cfg.n_min = j.value("n_min", cfg.n_min);
  cfg.n_max = j.value("n_max", cfg.n_max);
  cfg.replications = j.value("replications", cfg.replications);
  if (j.contains("generator")) {
    const auto& g = j.at("generator");
    if (g.contains("family")) cfg.generator.family = parse_family(g.at("family").get<std::string>());
    cfg.generator.blocks = g.value("blocks", cfg.generator.blocks);
    cfg.generator.path = g.value("path", cfg.generator.path);
  }
  if (j.contains("noise")) {
    const auto& z = j.at("noise");
    if (z.contains("kind")) cfg.noise.kind = parse_noise(z.at("kind").get<std::string>());
    cfg.noise.sigma = z.value("sigma", cfg.noise.sigma);
  }
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : j.at("methods")) cfg.methods.push_back(parse_method(name.get<std::string>()));
  }
  if (j.contains("shape")) cfg.shape = parse_shape(j.at("shape").get<std::string>());
  cfg.tau = j.value("tau", cfg.tau);
  if (j.contains("tau_rule_c")) cfg.tau_rule_c = j.at("tau_rule_c").get<double>();
  cfg.exhaustive_cap = j.value("exhaustive_cap", cfg.exhaustive_cap);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.timing = j.value("timing", cfg.timing);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.out_path = j.value("out_path", cfg.out_path);
  return cfg;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  if (!cfg.grid.empty()) {
    j["grid"] = nlohmann::json::array();
    for (const auto& c : cfg.grid) j["grid"].push_back({c.n, c.m});
  }
  j["rules"] = nlohmann::json::array();
  for (ColumnRule r : cfg.rules) j["rules"].push_back(std::string(rule_name(r)));
  j["n_points"] = cfg.n_points;
  j["n_min"] = cfg.n_min;
  j["n_max"] = cfg.n_max;
  j["replications"] = cfg.replications;
  j["generator"] = {{"family", std::string(family_name(cfg.generator.family))},
                    {"blocks", cfg.generator.blocks},
                    {"path", cfg.generator.path}};
  j["noise"] = {{"kind", std::string(noise_name(cfg.noise.kind))}, {"sigma", cfg.noise.sigma}};
  j["methods"] = nlohmann::json::array();
  for (Method m : cfg.methods) j["methods"].push_back(std::string(method_name(m)));
  j["shape"] = cfg.shape.kind == ShapeSpec::Kind::kUnimodal ? "unimodal" : "monotone";
  j["tau"] = cfg.tau;
  if (cfg.tau_rule_c) j["tau_rule_c"] = *cfg.tau_rule_c;
  j["exhaustive_cap"] = cfg.exhaustive_cap;
  j["seed"] = cfg.seed;
  j["timing"] = cfg.timing;
  j["threads"] = cfg.threads;
  j["out_path"] = cfg.out_path;
  return j;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return config_from_json(nlohmann::json::parse(in));
}

}  // namespace seriation

#endif  // SERIATION_EXPERIMENT_JSON_HPP
