#ifndef SERIATION_METRICS_HPP
#define SERIATION_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "seriation/core.hpp"
#include "seriation/shape_regression.hpp"

namespace seriation {

struct LevelCount {
  std::size_t total = 0;  // K(A)
  std::vector<std::size_t> per_column;
};

/// Number of distinct values in each column and their sum K(A).
///
/// With quantum > 0, sorted values closer than `quantum` to their
/// predecessor are counted as the same level.
inline LevelCount count_levels(const Matrix& a, double quantum = 0.0) {
  LevelCount out;
  out.per_column.reserve(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    auto col = a.column(j);
    std::sort(col.begin(), col.end());
    std::size_t k = 1;
    for (std::size_t i = 1; i < col.size(); ++i) {
      if (col[i] - col[i - 1] > quantum) ++k;
    }
    out.per_column.push_back(k);
    out.total += k;
  }
  return out;
}

struct Variation {
  double value = 0.0;  // V(A)
  std::vector<double> per_column;
};

/// Per-column range max - min, aggregated as the 2/3 power mean raised to 3/2.
inline Variation variation(const Matrix& a) {
  Variation out;
  out.per_column.assign(a.cols(), 0.0);
  double acc = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double lo = a(0, j);
    double hi = a(0, j);
    for (std::size_t i = 1; i < a.rows(); ++i) {
      lo = std::min(lo, a(i, j));
      hi = std::max(hi, a(i, j));
    }
    out.per_column[j] = hi - lo;
    acc += std::cbrt(out.per_column[j] * out.per_column[j]);
  }
  const double mean = acc / static_cast<double>(a.cols());
  out.value = mean * std::sqrt(mean);
  return out;
}

/// Sparsity/density score of a row difference u:
/// min(|u|_2^2 / |u|_inf^2, m |u|_2^2 / |u|_1^2). Zero for u = 0.
inline double row_difference_score(std::span<const double> a, std::span<const double> b) {
  double l1 = 0.0, l2 = 0.0, linf = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = std::abs(a[j] - b[j]);
    l1 += d;
    l2 += d * d;
    linf = std::max(linf, d);
  }
  if (linf == 0.0) return 0.0;
  const double sparse = l2 / (linf * linf);
  const double dense = static_cast<double>(a.size()) * l2 / (l1 * l1);
  return std::min(sparse, dense);
}

struct RStatistic {
  /// R(A); the lower bound 1 when every row is identical (see `degenerate`).
  double value = 1.0;
  /// True when no two rows differ, in which case R(A) is undefined.
  bool degenerate = false;
};

/// R(A) for a matrix with increasing columns.
///
/// The maximising index set takes the n largest scores over ordered pairs
/// (i, j); each unordered pair contributes its score twice and diagonal
/// pairs score zero. O(n^2 m).
inline RStatistic r_statistic(const Matrix& a) {
  if (!has_increasing_columns(a)) {
    throw std::invalid_argument("r_statistic: columns must be increasing");
  }
  const std::size_t n = a.rows();
  std::vector<double> scores;
  scores.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const double s = row_difference_score(a.row(i), a.row(k));
      if (s > 0.0) scores.push_back(s);
    }
  }
  if (scores.empty()) return {1.0, true};

  std::sort(scores.begin(), scores.end(), std::greater<>());
  double total = 0.0;
  std::size_t taken = 0;
  for (std::size_t p = 0; p < scores.size() && taken < n; ++p) {
    const std::size_t copies = std::min<std::size_t>(2, n - taken);
    total += static_cast<double>(copies) * scores[p];
    taken += copies;
  }
  return {total / static_cast<double>(n), false};
}

/// Row sum accumulated left to right.
inline double row_sum(std::span<const double> r) {
  double s = 0.0;
  for (double v : r) s += v;
  return s;
}

/// Gap between two rows: the largest entrywise increase from row i to row
/// i2, or the increase of the row sum scaled by 1/sqrt(m), whichever is
/// larger. Negative when row i2 lies below row i.
inline double gap(const Matrix& a, std::size_t i, std::size_t i2) {
  if (i >= a.rows() || i2 >= a.rows()) {
    throw std::out_of_range("gap: row index out of range");
  }
  const auto from = a.row(i);
  const auto to = a.row(i2);
  double max_diff = to[0] - from[0];
  for (std::size_t j = 1; j < a.cols(); ++j) max_diff = std::max(max_diff, to[j] - from[j]);
  const double sum_diff = row_sum(to) - row_sum(from);
  return std::max(max_diff, sum_diff / std::sqrt(static_cast<double>(a.cols())));
}

/// Gap expressed in units of the noise level sigma.
inline double gap(const Matrix& a, std::size_t i, std::size_t i2, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gap: sigma must be positive");
  return gap(a, i, i2) / sigma;
}

/// Smallest gap between consecutive rows. For increasing columns this is the
/// smallest gap over all ordered pairs i < i2.
inline double min_row_gap(const Matrix& a) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < a.rows(); ++i) best = std::min(best, gap(a, i, i + 1));
  return best;
}

struct ComplexityReport {
  std::size_t k = 0;
  double v = 0.0;
  std::optional<RStatistic> r;  // only for matrices with increasing columns
  std::vector<std::size_t> per_column_k;
  std::vector<double> per_column_v;
};

inline ComplexityReport complexity_report(const Matrix& a, double quantum = 0.0) {
  ComplexityReport out;
  auto levels = count_levels(a, quantum);
  auto var = variation(a);
  out.k = levels.total;
  out.per_column_k = std::move(levels.per_column);
  out.v = var.value;
  out.per_column_v = std::move(var.per_column);
  if (has_increasing_columns(a)) out.r = r_statistic(a);
  return out;
}

struct RearrangementCheck {
  double matrix_err = 0.0;  // |A2 - A|_F^2
  double perm_err = 0.0;    // |P2 A - P A|_F^2
  double joint_err = 0.0;   // |P2 A2 - P A|_F^2
  bool ok = false;
};

/// Checks both rearrangement inequalities for increasing-column matrices:
/// matrix_err <= joint_err and perm_err <= 4 joint_err.
inline RearrangementCheck rearrangement_check(const Matrix& truth, const Matrix& estimate,
                                              const Permutation& p_truth,
                                              const Permutation& p_estimate) {
  require_same_shape(truth, estimate, "rearrangement_check");
  if (!has_increasing_columns(truth) || !has_increasing_columns(estimate)) {
    throw std::invalid_argument("rearrangement_check: both matrices need increasing columns");
  }
  const Matrix placed_truth = permute_rows(p_truth, truth);
  RearrangementCheck out;
  out.matrix_err = frobenius_sq_dist(estimate, truth);
  out.perm_err = frobenius_sq_dist(permute_rows(p_estimate, truth), placed_truth);
  out.joint_err = frobenius_sq_dist(permute_rows(p_estimate, estimate), placed_truth);
  out.ok = out.matrix_err <= out.joint_err + kEps && out.perm_err <= 4.0 * out.joint_err + kEps;
  return out;
}

}  // namespace seriation

#endif  // SERIATION_METRICS_HPP
