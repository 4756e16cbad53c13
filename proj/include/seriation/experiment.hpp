#ifndef SERIATION_EXPERIMENT_HPP
#define SERIATION_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "seriation/core.hpp"
#include "seriation/estimators.hpp"
#include "seriation/io.hpp"
#include "seriation/synth.hpp"

namespace seriation {

enum class Method { kRankScore, kRankSum, kOracle, kAverage, kExhaustive };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::kRankScore: return "rankscore";
    case Method::kRankSum: return "ranksum";
    case Method::kOracle: return "oracle";
    case Method::kAverage: return "average";
    case Method::kExhaustive: return "exhaustive";
  }
  return "?";
}

inline Method parse_method(std::string_view name) {
  for (Method m : {Method::kRankScore, Method::kRankSum, Method::kOracle, Method::kAverage,
                   Method::kExhaustive}) {
    if (method_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

/// How the column count follows the row count on a generated grid.
enum class ColumnRule { kSqrt, kLinear, kThreeHalves };

inline std::string_view rule_name(ColumnRule r) {
  switch (r) {
    case ColumnRule::kSqrt: return "m=n^1/2";
    case ColumnRule::kLinear: return "m=n";
    case ColumnRule::kThreeHalves: return "m=n^3/2";
  }
  return "?";
}

inline ColumnRule parse_rule(std::string_view name) {
  for (ColumnRule r : {ColumnRule::kSqrt, ColumnRule::kLinear, ColumnRule::kThreeHalves}) {
    if (rule_name(r) == name) return r;
  }
  throw std::invalid_argument("unknown column rule '" + std::string(name) + "'");
}

inline std::size_t columns_for(ColumnRule r, std::size_t n) {
  const double x = static_cast<double>(n);
  double m = x;
  if (r == ColumnRule::kSqrt) m = std::sqrt(x);
  if (r == ColumnRule::kThreeHalves) m = x * std::sqrt(x);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(m)));
}

/// round(10^t) for t on `points` equally spaced values between log10(lo)
/// and log10(hi), duplicates removed.
inline std::vector<std::size_t> log_grid(std::size_t lo, std::size_t hi, std::size_t points) {
  if (points < 2) throw std::invalid_argument("log_grid: need at least 2 points");
  if (lo < 1 || hi <= lo) throw std::invalid_argument("log_grid: need 1 <= n_min < n_max");
  const double a = std::log10(static_cast<double>(lo));
  const double b = std::log10(static_cast<double>(hi));
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < points; ++k) {
    const double t = a + (b - a) * static_cast<double>(k) / static_cast<double>(points - 1);
    const auto n = static_cast<std::size_t>(std::llround(std::pow(10.0, t)));
    if (out.empty() || n != out.back()) out.push_back(n);
  }
  return out;
}

struct GridCell {
  std::size_t n = 0;
  std::size_t m = 0;
  friend bool operator==(const GridCell&, const GridCell&) = default;
};

struct ExperimentConfig {
  /// Explicit (n, m) cells; when empty the grid is built from `rules`.
  std::vector<GridCell> grid;
  std::vector<ColumnRule> rules{ColumnRule::kLinear};
  std::size_t n_points = 30;
  std::size_t n_min = 10;
  std::size_t n_max = 1024;
  std::size_t replications = 10;
  GeneratorSpec generator;  // n, m and seed are set per replication
  NoiseSpec noise;          // seed is set per replication
  std::vector<Method> methods{Method::kRankScore, Method::kRankSum, Method::kOracle};
  ShapeSpec shape = ShapeSpec::monotone();
  double tau = 6.0;
  /// When set, tau = 3 sigma sqrt((C + 1) log(nm)) per cell with this C.
  std::optional<double> tau_rule_c;
  std::size_t exhaustive_cap = kExhaustiveDefaultCap;
  std::uint64_t seed = 1;
  /// Wall-clock timing makes the output run-dependent; off by default.
  bool timing = false;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::string out_path;
};

struct ExperimentRecord {
  std::size_t n = 0;
  std::size_t m = 0;
  std::string method;
  double loss_total = 0.0;
  double loss_perm = 0.0;
  double loss_matrix = 0.0;
  double log10_loss_total = 0.0;
  double wall_time_ms = 0.0;
  std::uint64_t seed = 0;
  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

/// Outcome of one method on one replication.
struct MethodOutcome {
  Method method = Method::kOracle;
  Losses losses;
  double sse = 0.0;
  double wall_time_ms = 0.0;
};

struct ReplicationOutcome {
  Matrix truth;
  Permutation p_true;
  std::vector<MethodOutcome> methods;
};

inline std::vector<GridCell> expand_grid(const ExperimentConfig& cfg) {
  if (!cfg.grid.empty()) return cfg.grid;
  std::vector<GridCell> cells;
  const auto ns = log_grid(cfg.n_min, cfg.n_max, cfg.n_points);
  for (ColumnRule r : cfg.rules) {
    for (std::size_t n : ns) cells.push_back({n, columns_for(r, n)});
  }
  return cells;
}

/// Rejects a configuration before any work is done.
inline void validate(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("experiment: replications must be >= 1");
  if (cfg.methods.empty()) throw std::invalid_argument("experiment: no methods selected");
  if (cfg.grid.empty()) {
    if (cfg.n_points < 2) throw std::invalid_argument("experiment: n_points must be >= 2");
    if (cfg.rules.empty()) throw std::invalid_argument("experiment: no column rule");
    if (cfg.n_min < 1 || cfg.n_max <= cfg.n_min) {
      throw std::invalid_argument("experiment: need 1 <= n_min < n_max");
    }
  } else {
    for (std::size_t k = 0; k < cfg.grid.size(); ++k) {
      if (cfg.grid[k].n < 1 || cfg.grid[k].m < 1) {
        throw std::invalid_argument("experiment: grid cells need n, m >= 1");
      }
      if (k > 0 && cfg.grid[k].n <= cfg.grid[k - 1].n) {
        throw std::invalid_argument("experiment: grid n values must be strictly increasing");
      }
    }
  }
  if (cfg.noise.sigma < 0.0) throw std::invalid_argument("experiment: sigma must be >= 0");
  if (cfg.tau < 0.0) throw std::invalid_argument("experiment: tau must be >= 0");
  const auto cells = expand_grid(cfg);
  for (Method m : cfg.methods) {
    if ((m == Method::kRankScore || m == Method::kRankSum) &&
        cfg.shape.kind != ShapeSpec::Kind::kMonotone) {
      throw UnsupportedEstimator("experiment: " + std::string(method_name(m)) +
                                 " requires the monotone shape");
    }
    if (m == Method::kExhaustive) {
      for (const auto& c : cells) {
        if (c.n > cfg.exhaustive_cap) {
          throw std::invalid_argument("experiment: exhaustive requested with n = " +
                                      std::to_string(c.n) + " above the cap of " +
                                      std::to_string(cfg.exhaustive_cap) + " (n! cost)");
        }
      }
    }
  }
  if (cfg.generator.family == Family::kRandomKBlocks) {
    for (const auto& c : cells) block_sizes(c.n, cfg.generator.blocks);
  }
  if (cfg.generator.family == Family::kCustom) {
    const Matrix a = gen_truth(cfg.generator);
    for (const auto& c : cells) {
      if (c.n != a.rows() || c.m != a.cols()) {
        throw std::invalid_argument("experiment: custom truth is " + std::to_string(a.rows()) +
                                    " x " + std::to_string(a.cols()) +
                                    " but the grid asks for " + std::to_string(c.n) + " x " +
                                    std::to_string(c.m));
      }
    }
  }
}

/// Seed of cell `cell` under the master seed.
inline std::uint64_t cell_seed(std::uint64_t master, std::size_t cell) {
  return derive_seed(master, cell);
}

/// One replication on an n x m cell: fresh truth, uniform permutation, noise,
/// then every configured method.
inline ReplicationOutcome run_replication(const ExperimentConfig& cfg, GridCell cell,
                                          std::uint64_t rep_seed) {
  GeneratorSpec gen = cfg.generator;
  gen.n = cell.n;
  gen.m = cell.m;
  gen.seed = derive_seed(rep_seed, 0);
  NoiseSpec noise = cfg.noise;
  noise.seed = derive_seed(rep_seed, 2);

  ReplicationOutcome out;
  out.truth = gen_truth(gen);
  Rng perm_rng(derive_seed(rep_seed, 1));
  out.p_true = random_permutation(out.truth.rows(), perm_rng);
  const Matrix y = gen_observation(out.truth, out.p_true, noise);

  EstimatorConfig ecfg;
  ecfg.shape = cfg.shape;
  ecfg.sigma = cfg.noise.sigma;
  ecfg.tau = cfg.tau_rule_c ? tau_from_rule(cfg.noise.sigma, *cfg.tau_rule_c, y.rows(), y.cols())
                            : cfg.tau;

  for (Method m : cfg.methods) {
    const auto start = std::chrono::steady_clock::now();
    FitResult fit = [&] {
      switch (m) {
        case Method::kRankScore: return rank_score(y, ecfg);
        case Method::kRankSum: return rank_sum(y);
        case Method::kOracle: return oracle_fit(y, out.p_true, cfg.shape);
        case Method::kAverage: return averaging_fit(y);
        case Method::kExhaustive: return exhaustive_ls(y, cfg.shape, cfg.exhaustive_cap);
      }
      throw std::logic_error("unhandled method");
    }();
    const auto stop = std::chrono::steady_clock::now();
    MethodOutcome mo;
    mo.method = m;
    mo.losses = estimation_losses(fit, out.p_true, out.truth);
    mo.sse = fit.sse;
    if (cfg.timing) {
      mo.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    }
    out.methods.push_back(mo);
  }
  return out;
}

namespace detail {

/// Runs body(k) for k in [0, count) on `threads` workers. Each index is
/// handled exactly once; callers write results to slot k.
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k; !failed && (k = next.fetch_add(1)) < count;) {
        try {
          body(k);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Runs the whole grid. Records come out in (cell, method) order and depend
/// only on the configuration and master seed, whatever the thread count.
inline std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto cells = expand_grid(cfg);
  const std::size_t reps = cfg.replications;
  std::vector<std::vector<MethodOutcome>> slots(cells.size() * reps);

  detail::parallel_for(slots.size(), cfg.threads, [&](std::size_t k) {
    const std::size_t c = k / reps;
    const std::size_t r = k % reps;
    slots[k] = run_replication(cfg, cells[c], derive_seed(cell_seed(cfg.seed, c), r)).methods;
  });

  std::vector<ExperimentRecord> records;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      ExperimentRecord rec;
      rec.n = cells[c].n;
      rec.m = cells[c].m;
      rec.method = std::string(method_name(cfg.methods[mi]));
      rec.seed = cell_seed(cfg.seed, c);
      for (std::size_t r = 0; r < reps; ++r) {
        const MethodOutcome& mo = slots[c * reps + r][mi];
        rec.loss_total += mo.losses.total;
        rec.loss_perm += mo.losses.perm_only;
        rec.loss_matrix += mo.losses.matrix_only;
        rec.wall_time_ms += mo.wall_time_ms;
      }
      const double denom = static_cast<double>(reps);
      rec.loss_total /= denom;
      rec.loss_perm /= denom;
      rec.loss_matrix /= denom;
      rec.wall_time_ms /= denom;
      rec.log10_loss_total = std::log10(rec.loss_total);
      records.push_back(std::move(rec));
    }
  }
  return records;
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of log10(y) on log10(x).
inline SlopeFit fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog_slope: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("fit_loglog_slope: need at least 3 points");
  const std::size_t k = x.size();
  std::vector<double> lx(k), ly(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(x[i] > 0.0)) throw std::invalid_argument("fit_loglog_slope: x must be positive");
    if (!(y[i] > 0.0)) {
      throw std::invalid_argument(
          "fit_loglog_slope: zero loss has no logarithm; run with noise (sigma > 0)");
    }
    lx[i] = std::log10(x[i]);
    ly[i] = std::log10(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_loglog_slope: x values are all equal");
  SlopeFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return out;
}

/// Slope of loss_total against n over the records of one method (and,
/// optionally, one column rule).
inline SlopeFit fit_loglog_slope(const std::vector<ExperimentRecord>& records,
                                 std::string_view method,
                                 std::optional<ColumnRule> rule = std::nullopt) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    if (r.method != method) continue;
    if (rule && r.m != columns_for(*rule, r.n)) continue;
    x.push_back(static_cast<double>(r.n));
    y.push_back(r.loss_total);
  }
  return fit_loglog_slope(x, y);
}

inline constexpr std::string_view kRecordHeader =
    "n,m,method,loss_total,loss_perm,loss_matrix,log10_loss_total,wall_time_ms,seed";

inline void emit_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  std::string line(kRecordHeader);
  line += '\n';
  out << line;
  for (const auto& r : records) {
    line = std::to_string(r.n) + ',' + std::to_string(r.m) + ',' + r.method + ',' +
           io::format_double(r.loss_total) + ',' + io::format_double(r.loss_perm) + ',' +
           io::format_double(r.loss_matrix) + ',' + io::format_double(r.log10_loss_total) + ',' +
           io::format_double(r.wall_time_ms) + ',' + std::to_string(r.seed) + '\n';
    out << line;
  }
}

inline void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  emit_csv(out, records);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path);
}

inline std::vector<ExperimentRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader) {
    throw std::runtime_error("records CSV: missing or unexpected header");
  }
  std::vector<ExperimentRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 9) throw std::runtime_error("records CSV: expected 9 fields in '" + line + "'");
    ExperimentRecord r;
    r.n = std::stoull(f[0]);
    r.m = std::stoull(f[1]);
    r.method = f[2];
    r.loss_total = std::stod(f[3]);
    r.loss_perm = std::stod(f[4]);
    r.loss_matrix = std::stod(f[5]);
    r.log10_loss_total = f[6] == "-inf" ? -HUGE_VAL : std::stod(f[6]);
    r.wall_time_ms = std::stod(f[7]);
    r.seed = std::stoull(f[8]);
    out.push_back(std::move(r));
  }
  return out;
}

/// Presets for the published figures at desk scale.
inline ExperimentConfig figure_preset(std::string_view figure) {
  ExperimentConfig cfg;
  cfg.n_points = 30;
  cfg.replications = 10;
  cfg.tau = 6.0;
  cfg.noise = {NoiseKind::kGaussian, 1.0, 0};
  cfg.rules = {ColumnRule::kLinear};
  cfg.n_min = 10;
  if (figure == "1-left" || figure == "1-right") {
    cfg.generator.family =
        figure == "1-left" ? Family::kSparseRows : Family::kIdenticalColumns;
    cfg.methods = {Method::kRankScore, Method::kRankSum, Method::kOracle};
    cfg.n_max = 1024;
  } else if (figure == "2-left" || figure == "2-right") {
    cfg.generator.family = figure == "2-left" ? Family::kRandomKBlocks : Family::kRandomVBounded;
    cfg.generator.blocks = 5;
    cfg.rules = {ColumnRule::kSqrt, ColumnRule::kLinear, ColumnRule::kThreeHalves};
    cfg.methods = {Method::kRankScore, Method::kOracle};
    cfg.n_max = 512;
  } else if (figure == "3") {
    cfg.generator.family = Family::kTriangular;
    cfg.methods = {Method::kRankScore, Method::kOracle};
    cfg.n_max = 1024;
  } else {
    throw std::invalid_argument("unknown figure preset '" + std::string(figure) +
                                "' (expected 1-left, 1-right, 2-left, 2-right or 3)");
  }
  return cfg;
}

}  // namespace seriation

#endif  // SERIATION_EXPERIMENT_HPP
