// Command-line front end: generate, estimate, metrics, experiment.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "seriation/experiment_json.hpp"
#include "seriation/seriation.hpp"

namespace {

using nlohmann::json;
using namespace seriation;

struct GenerateArgs {
  std::string family = "sparse-rows";
  std::size_t blocks = 5;
  std::string path;
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string perm_out;
  std::string noise = "gaussian";
  double sigma = 1.0;
  std::string obs_out;
};

int run_generate(const GenerateArgs& a) {
  GeneratorSpec spec;
  spec.family = parse_family(a.family);
  spec.n = a.n;
  spec.m = a.m;
  spec.blocks = a.blocks;
  spec.path = a.path;
  spec.seed = derive_seed(a.seed, 0);
  const Matrix truth = gen_truth(spec);
  io::write_matrix_csv(a.out, truth);

  if (!a.perm_out.empty() || !a.obs_out.empty()) {
    Rng perm_rng(derive_seed(a.seed, 1));
    const Permutation p = random_permutation(truth.rows(), perm_rng);
    if (!a.perm_out.empty()) io::write_permutation(a.perm_out, p);
    if (!a.obs_out.empty()) {
      const NoiseSpec noise{parse_noise(a.noise), a.sigma, derive_seed(a.seed, 2)};
      io::write_matrix_csv(a.obs_out, gen_observation(truth, p, noise));
    }
  }
  return 0;
}

struct EstimateArgs {
  std::string method = "rankscore";
  std::string shape = "monotone";
  double tau = 6.0;
  bool tau_rule = false;
  double tau_c = 1.0;
  double sigma = 1.0;
  std::string in;
  std::string truth;
  std::string perm;
  std::string fit_out;
  std::size_t max_rows = kExhaustiveDefaultCap;
};

int run_estimate(const EstimateArgs& a) {
  const Matrix y = io::read_matrix_csv(a.in);
  EstimatorConfig cfg;
  cfg.shape = parse_shape(a.shape);
  cfg.sigma = a.sigma;
  cfg.tau = a.tau_rule ? tau_from_rule(a.sigma, a.tau_c, y.rows(), y.cols()) : a.tau;

  std::optional<Permutation> p_true;
  if (!a.perm.empty()) p_true = io::read_permutation(a.perm);

  const Method method = parse_method(a.method);
  FitResult fit = [&] {
    switch (method) {
      case Method::kRankScore: return rank_score(y, cfg);
      case Method::kRankSum:
        if (cfg.shape.kind != ShapeSpec::Kind::kMonotone) {
          throw UnsupportedEstimator("ranksum is only defined for monotone columns");
        }
        return rank_sum(y);
      case Method::kExhaustive: return exhaustive_ls(y, cfg.shape, a.max_rows);
      case Method::kAverage: return averaging_fit(y);
      case Method::kOracle:
        if (!p_true) throw std::invalid_argument("oracle needs --perm");
        return oracle_fit(y, *p_true, cfg.shape);
    }
    throw std::logic_error("unhandled method");
  }();

  json j;
  j["method"] = a.method;
  j["shape"] = a.shape;
  j["n"] = y.rows();
  j["m"] = y.cols();
  j["tau"] = cfg.tau;
  j["sse"] = fit.sse;
  j["p_hat"] = fit.p_hat.mapping();
  if (fit.scores) j["scores"] = *fit.scores;
  if (!a.truth.empty()) {
    if (!p_true) throw std::invalid_argument("--truth needs --perm");
    const Losses l = estimation_losses(fit, *p_true, io::read_matrix_csv(a.truth));
    j["loss_total"] = l.total;
    j["loss_perm"] = l.perm_only;
    j["loss_matrix"] = l.matrix_only;
  }
  if (!a.fit_out.empty()) io::write_matrix_csv(a.fit_out, fit.m_hat);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int run_metrics(const std::string& path, double quantum) {
  const ComplexityReport rep = complexity_report(io::read_matrix_csv(path), quantum);
  json j;
  j["K"] = rep.k;
  j["V"] = rep.v;
  j["R"] = rep.r ? json(rep.r->value) : json(nullptr);
  j["R_degenerate"] = rep.r ? json(rep.r->degenerate) : json(nullptr);
  j["per_column_k"] = rep.per_column_k;
  j["per_column_v"] = rep.per_column_v;
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct ExperimentArgs {
  std::string figure;
  std::string config;
  std::optional<std::size_t> n_max;
  std::optional<std::size_t> replications;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string out;
  bool timing = false;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  ExperimentConfig cfg = a.config.empty() ? figure_preset(a.figure) : load_config(a.config);
  if (a.n_max) cfg.n_max = *a.n_max;
  if (a.replications) cfg.replications = *a.replications;
  if (a.seed) cfg.seed = *a.seed;
  if (a.threads) cfg.threads = *a.threads;
  if (a.timing) cfg.timing = true;
  if (!a.out.empty()) cfg.out_path = a.out;

  const auto records = run_experiment(cfg);
  if (cfg.out_path.empty()) {
    emit_csv(std::cout, records);
  } else {
    emit_csv(records, cfg.out_path);
  }

  std::vector<std::optional<ColumnRule>> groups;
  if (cfg.grid.empty()) {
    for (ColumnRule r : cfg.rules) groups.emplace_back(r);
  } else {
    groups.emplace_back(std::nullopt);
  }
  for (Method m : cfg.methods) {
    for (const auto& rule : groups) {
      std::cerr << method_name(m);
      if (rule) std::cerr << " [" << rule_name(*rule) << "]";
      try {
        const SlopeFit f = fit_loglog_slope(records, method_name(m), rule);
        std::cerr << ": slope " << f.slope << ", r^2 " << f.r_squared << '\n';
      } catch (const std::invalid_argument& e) {
        std::cerr << ": no slope (" << e.what() << ")\n";
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seriation under shape constraints: generators, estimators and experiments"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a ground-truth matrix and optional observation");
  g->add_option("--family", gen.family,
                "sparse-rows, identical-columns, triangular, random-v, random-k-blocks, custom")
      ->capture_default_str();
  g->add_option("--blocks", gen.blocks, "Blocks for random-k-blocks")->capture_default_str();
  g->add_option("--path", gen.path, "CSV truth for the custom family");
  g->add_option("--n", gen.n, "Rows");
  g->add_option("--m", gen.m, "Columns");
  g->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  g->add_option("--out", gen.out, "Truth CSV")->required();
  g->add_option("--perm-out", gen.perm_out, "Hidden permutation, one index per line");
  g->add_option("--noise", gen.noise, "gaussian, rademacher or none")->capture_default_str();
  g->add_option("--sigma", gen.sigma, "Noise level")->capture_default_str();
  g->add_option("--obs-out", gen.obs_out, "Observation CSV");

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Fit a permutation and shape-constrained matrix");
  e->add_option("--method", est.method, "rankscore, ranksum, exhaustive, oracle or average")
      ->capture_default_str();
  e->add_option("--shape", est.shape, "monotone or unimodal")->capture_default_str();
  auto* tau_opt = e->add_option("--tau", est.tau, "RankScore threshold")->capture_default_str();
  auto* rule_opt =
      e->add_flag("--tau-rule", est.tau_rule, "Use tau = 3 sigma sqrt((C + 1) log(nm))");
  tau_opt->excludes(rule_opt);
  e->add_option("--tau-c", est.tau_c, "C in the tau rule")->capture_default_str();
  e->add_option("--sigma", est.sigma, "Noise level")->capture_default_str();
  e->add_option("--in", est.in, "Observation CSV")->required();
  e->add_option("--truth", est.truth, "Truth CSV, for losses");
  e->add_option("--perm", est.perm, "True permutation, for oracle and losses");
  e->add_option("--fit-out", est.fit_out, "Write the fitted matrix as CSV");
  e->add_option("--max-rows", est.max_rows, "Row cap for exhaustive")->capture_default_str();

  std::string metrics_path;
  double quantum = 0.0;
  auto* mt = app.add_subcommand("metrics", "Print K, V and R of a matrix as JSON");
  mt->add_option("matrix", metrics_path, "Matrix CSV")->required();
  mt->add_option("--quantize", quantum, "Merge column values closer than this")
      ->capture_default_str();

  ExperimentArgs ex;
  auto* x = app.add_subcommand("experiment", "Run a simulation grid and write records as CSV");
  auto* fig = x->add_option("--figure", ex.figure, "1-left, 1-right, 2-left, 2-right or 3");
  auto* cfg = x->add_option("--config", ex.config, "JSON configuration");
  fig->excludes(cfg);
  x->add_option("--n-max", ex.n_max, "Largest n on the grid");
  x->add_option("--replications", ex.replications, "Replications per cell");
  x->add_option("--seed", ex.seed, "Master seed");
  x->add_option("--threads", ex.threads, "Worker threads (0: all cores)");
  x->add_option("--out", ex.out, "Records CSV (default stdout)");
  x->add_flag("--timing", ex.timing, "Record wall-clock time per method");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*g) {
      if (gen.family != "custom" && (gen.n == 0 || gen.m == 0)) {
        throw std::invalid_argument("--n and --m are required");
      }
      return run_generate(gen);
    }
    if (*e) return run_estimate(est);
    if (*mt) return run_metrics(metrics_path, quantum);
    if (*x) {
      if (ex.figure.empty() && ex.config.empty()) {
        throw std::invalid_argument("one of --figure or --config is required");
      }
      return run_experiment_cmd(ex);
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
