#ifndef SERIATION_ESTIMATORS_HPP
#define SERIATION_ESTIMATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seriation/core.hpp"
#include "seriation/metrics.hpp"
#include "seriation/shape_regression.hpp"

namespace seriation {

/// Raised when an estimator is asked for a shape it is not defined on.
class UnsupportedEstimator : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Estimated pair (p_hat, a_hat) with m_hat = p_hat applied to a_hat.
struct FitResult {
  Permutation p_hat;
  Matrix a_hat;
  Matrix m_hat;
  double sse = 0.0;  // |Y - m_hat|_F^2
  std::optional<std::vector<std::size_t>> scores;
};

struct EstimatorConfig {
  ShapeSpec shape = ShapeSpec::monotone();
  double sigma = 1.0;
  double tau = 6.0;
};

/// Threshold 3 sigma sqrt((C + 1) log(nm)), natural log.
inline double tau_from_rule(double sigma, double c, std::size_t n, std::size_t m) {
  if (sigma < 0.0 || c < 0.0) throw std::invalid_argument("tau_from_rule: negative parameter");
  return 3.0 * sigma * std::sqrt((c + 1.0) * std::log(static_cast<double>(n * m)));
}

/// Fits a_hat in `shape` so that p a_hat is the projection of y onto p(shape).
inline FitResult fit_with_permutation(const Matrix& y, const Permutation& p,
                                      const ShapeSpec& shape) {
  FitResult out;
  out.p_hat = p;
  out.a_hat = project_columns(permute_rows(inverse(p), y), shape);
  out.m_hat = permute_rows(p, out.a_hat);
  out.sse = frobenius_sq_dist(y, out.m_hat);
  return out;
}

/// Permutation that lists rows of y in stable ascending order of `keys`:
/// row r of the estimate is row mapping[r] of y.
template <typename Key>
Permutation order_by(const std::vector<Key>& keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  return Permutation(std::move(order));
}

/// s_i = #{l : gap(Y, l, i) >= 2 tau}, the number of rows that row i clears
/// by at least 2 tau.
inline std::vector<std::size_t> rank_scores(const Matrix& y, double tau) {
  if (tau < 0.0) throw std::invalid_argument("rank_scores: tau must be nonnegative");
  const std::size_t n = y.rows();
  const std::size_t m = y.cols();
  const double threshold = 2.0 * tau;
  const double sqrt_m = std::sqrt(static_cast<double>(m));
  std::vector<double> sums(n);
  for (std::size_t i = 0; i < n; ++i) sums[i] = row_sum(y.row(i));

  constexpr std::size_t kChunk = 64;
  std::vector<std::size_t> scores(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto yi = y.row(i);
    std::size_t s = 0;
    for (std::size_t l = 0; l < n; ++l) {
      if ((sums[i] - sums[l]) / sqrt_m >= threshold) {
        ++s;
        continue;
      }
      const auto yl = y.row(l);
      bool hit = false;
      for (std::size_t j0 = 0; j0 < m && !hit; j0 += kChunk) {
        const std::size_t j1 = std::min(m, j0 + kChunk);
        double mx = yi[j0] - yl[j0];
        for (std::size_t j = j0 + 1; j < j1; ++j) mx = std::max(mx, yi[j] - yl[j]);
        hit = mx >= threshold;
      }
      if (hit) ++s;
    }
    scores[i] = s;
  }
  return scores;
}

/// RankScore: orders rows by increasing score (ties by original index), then
/// projects onto the monotone cone under that ordering.
inline FitResult rank_score(const Matrix& y, const EstimatorConfig& cfg) {
  if (cfg.shape.kind != ShapeSpec::Kind::kMonotone) {
    throw UnsupportedEstimator("rank_score is only defined for monotone columns");
  }
  auto scores = rank_scores(y, cfg.tau);
  FitResult out = fit_with_permutation(y, order_by(scores), ShapeSpec::monotone());
  out.scores = std::move(scores);
  return out;
}

/// RankSum: orders rows by increasing row sum (ties by original index).
inline FitResult rank_sum(const Matrix& y) {
  std::vector<double> sums(y.rows());
  for (std::size_t i = 0; i < y.rows(); ++i) sums[i] = row_sum(y.row(i));
  return fit_with_permutation(y, order_by(sums), ShapeSpec::monotone());
}

inline constexpr std::size_t kExhaustiveDefaultCap = 8;

/// Least squares over every row permutation and the cone, by enumeration.
///
/// Permutations are visited in lexicographic order and a candidate replaces
/// the incumbent only on strictly smaller SSE, so ties go to the
/// lexicographically smallest mapping. Costs n! column projections.
inline FitResult exhaustive_ls(const Matrix& y, const ShapeSpec& shape,
                               std::size_t max_rows = kExhaustiveDefaultCap) {
  const std::size_t n = y.rows();
  if (n > max_rows) {
    throw std::invalid_argument("exhaustive_ls: n = " + std::to_string(n) +
                                " exceeds the cap of " + std::to_string(max_rows) +
                                " rows; enumeration costs n! projections");
  }
  std::vector<std::size_t> mapping(n);
  std::iota(mapping.begin(), mapping.end(), std::size_t{0});
  std::optional<FitResult> best;
  do {
    FitResult candidate = fit_with_permutation(y, Permutation(mapping), shape);
    if (!best || candidate.sse < best->sse) best = std::move(candidate);
  } while (std::next_permutation(mapping.begin(), mapping.end()));
  return std::move(*best);
}

/// Projection under the known permutation.
inline FitResult oracle_fit(const Matrix& y, const Permutation& p_true, const ShapeSpec& shape) {
  return fit_with_permutation(y, p_true, shape);
}

/// Identity permutation; every row of a_hat is the vector of column means.
inline FitResult averaging_fit(const Matrix& y) {
  const std::size_t n = y.rows();
  const std::size_t m = y.cols();
  std::vector<double> means(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = y.row(i);
    for (std::size_t j = 0; j < m; ++j) means[j] += r[j];
  }
  for (double& v : means) v /= static_cast<double>(n);

  FitResult out;
  out.p_hat = Permutation::identity(n);
  out.a_hat = Matrix(n, m);
  for (std::size_t i = 0; i < n; ++i) std::copy(means.begin(), means.end(), out.a_hat.row(i).begin());
  out.m_hat = out.a_hat;
  out.sse = frobenius_sq_dist(y, out.m_hat);
  return out;
}

/// Per-entry squared losses against the truth (p_true, a_true).
struct Losses {
  double total = 0.0;        // |M_hat - P A|^2 / nm
  double perm_only = 0.0;    // |P_hat A - P A|^2 / nm
  double matrix_only = 0.0;  // |A_hat - A|^2 / nm
};

inline Losses estimation_losses(const FitResult& fit, const Permutation& p_true,
                                const Matrix& a_true) {
  require_same_shape(fit.a_hat, a_true, "estimation_losses");
  const double nm = static_cast<double>(a_true.size());
  const Matrix placed = permute_rows(p_true, a_true);
  Losses out;
  out.total = frobenius_sq_dist(fit.m_hat, placed) / nm;
  out.perm_only = frobenius_sq_dist(permute_rows(fit.p_hat, a_true), placed) / nm;
  out.matrix_only = frobenius_sq_dist(fit.a_hat, a_true) / nm;
  return out;
}

}  // namespace seriation

#endif  // SERIATION_ESTIMATORS_HPP
