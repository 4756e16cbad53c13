#ifndef SERIATION_SHAPE_REGRESSION_HPP
#define SERIATION_SHAPE_REGRESSION_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "seriation/core.hpp"

namespace seriation {

/// Target cone of a shape-constrained fit.
///
/// Positions are 0-based: FixedMode(peak) is the cone of vectors increasing
/// on [0, peak] and decreasing on [peak, n-1], i.e. the 1-based cone C_l
/// with l = peak + 1.
struct ShapeSpec {
  enum class Kind { kMonotone, kUnimodal, kFixedMode };

  Kind kind = Kind::kMonotone;
  std::size_t peak = 0;

  static ShapeSpec monotone() { return {Kind::kMonotone, 0}; }
  static ShapeSpec unimodal() { return {Kind::kUnimodal, 0}; }
  static ShapeSpec fixed_mode(std::size_t peak) { return {Kind::kFixedMode, peak}; }

  friend bool operator==(const ShapeSpec&, const ShapeSpec&) = default;
};

inline std::string to_string(const ShapeSpec& s) {
  switch (s.kind) {
    case ShapeSpec::Kind::kMonotone:
      return "monotone";
    case ShapeSpec::Kind::kUnimodal:
      return "unimodal";
    case ShapeSpec::Kind::kFixedMode:
      return "fixed-mode(" + std::to_string(s.peak) + ")";
  }
  return "?";
}

struct VectorFit {
  std::vector<double> fitted;
  double sse = 0.0;
  /// Position of the maximum for unimodal and fixed-mode fits.
  std::optional<std::size_t> peak;
};

namespace detail {

/// Pooled block of the pool-adjacent-violators stack.
struct Block {
  double sum = 0.0;
  double weight = 0.0;
  double sse = 0.0;  // within-block squared deviation from the mean
  std::size_t start = 0;

  double mean() const { return sum / weight; }
};

// Merging two blocks adds w_a w_b / (w_a + w_b) (mean_a - mean_b)^2 to the
// within-block SSE; accumulating this way avoids the sum-of-squares cancellation.
inline void absorb(Block& into, const Block& other) {
  const double d = into.mean() - other.mean();
  into.sse += other.sse + into.weight * other.weight / (into.weight + other.weight) * d * d;
  into.sum += other.sum;
  into.weight += other.weight;
  into.start = std::min(into.start, other.start);
}

/// Incremental PAVA for a non-decreasing fit. Pushing values one by one keeps
/// the stack equal to the isotonic fit of everything pushed so far. Blocks of
/// equal mean are pooled, so the top block starts at the first maximiser.
class PavaStack {
 public:
  void reserve(std::size_t n) { blocks_.reserve(n); }

  void push(double value, std::size_t position) {
    Block b{value, 1.0, 0.0, position};
    while (!blocks_.empty() && blocks_.back().mean() >= b.mean()) {
      Block top = blocks_.back();
      blocks_.pop_back();
      total_sse_ -= top.sse;
      absorb(top, b);
      b = top;
    }
    total_sse_ += b.sse;
    blocks_.push_back(b);
  }

  double total_sse() const { return total_sse_; }
  bool empty() const { return blocks_.empty(); }
  const Block& top() const { return blocks_.back(); }
  Block pop() {
    Block b = blocks_.back();
    blocks_.pop_back();
    total_sse_ -= b.sse;
    return b;
  }
  const std::vector<Block>& blocks() const { return blocks_; }

 private:
  std::vector<Block> blocks_;
  double total_sse_ = 0.0;
};

inline void require_nonempty(std::span<const double> y, const char* what) {
  if (y.empty()) throw std::invalid_argument(std::string(what) + ": empty input vector");
}

inline double direct_sse(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace detail

/// Least-squares projection onto non-decreasing vectors (PAVA, O(n)).
inline VectorFit isotonic_fit(std::span<const double> y) {
  detail::require_nonempty(y, "isotonic_fit");
  detail::PavaStack stack;
  stack.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) stack.push(y[i], i);

  VectorFit out;
  out.fitted.resize(y.size());
  const auto& blocks = stack.blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::size_t end = b + 1 < blocks.size() ? blocks[b + 1].start : y.size();
    std::fill(out.fitted.begin() + static_cast<std::ptrdiff_t>(blocks[b].start),
              out.fitted.begin() + static_cast<std::ptrdiff_t>(end), blocks[b].mean());
  }
  out.sse = detail::direct_sse(out.fitted, y);
  return out;
}

/// Least-squares projection onto non-increasing vectors.
inline VectorFit antitonic_fit(std::span<const double> y) {
  detail::require_nonempty(y, "antitonic_fit");
  std::vector<double> reversed(y.rbegin(), y.rend());
  VectorFit out = isotonic_fit(reversed);
  std::reverse(out.fitted.begin(), out.fitted.end());
  out.sse = detail::direct_sse(out.fitted, y);
  return out;
}

/// Exact projection onto vectors increasing up to `peak` and decreasing after it.
///
/// Both chains are pooled independently, then the block holding `peak`
/// absorbs whichever neighbouring block exceeds it (largest first) until it
/// dominates both sides.
inline VectorFit fixed_mode_fit(std::span<const double> y, std::size_t peak) {
  detail::require_nonempty(y, "fixed_mode_fit");
  const std::size_t n = y.size();
  if (peak >= n) {
    throw std::invalid_argument("fixed_mode_fit: peak " + std::to_string(peak) +
                                " out of range for length " + std::to_string(n));
  }
  detail::PavaStack left;
  left.reserve(peak);
  for (std::size_t i = 0; i < peak; ++i) left.push(y[i], i);
  // Suffix read right to left is non-decreasing; block.start holds the
  // reversed position, translated back below.
  detail::PavaStack right;
  right.reserve(n - peak - 1);
  for (std::size_t i = n; i-- > peak + 1;) right.push(y[i], n - 1 - i);

  detail::Block centre{y[peak], 1.0, 0.0, 0};
  std::size_t centre_lo = peak;
  std::size_t centre_hi = peak;  // inclusive
  constexpr double kLowest = std::numeric_limits<double>::lowest();
  while (true) {
    const double lm = left.empty() ? kLowest : left.top().mean();
    const double rm = right.empty() ? kLowest : right.top().mean();
    if (std::max(lm, rm) <= centre.mean()) break;
    if (lm >= rm) {
      detail::Block b = left.pop();
      centre_lo = b.start;
      centre.sum += b.sum;
      centre.weight += b.weight;
    } else {
      detail::Block b = right.pop();
      centre_hi = n - 1 - b.start;
      centre.sum += b.sum;
      centre.weight += b.weight;
    }
  }

  VectorFit out;
  out.fitted.resize(n);
  out.peak = peak;
  const auto& lb = left.blocks();
  for (std::size_t b = 0; b < lb.size(); ++b) {
    const std::size_t end = b + 1 < lb.size() ? lb[b + 1].start : centre_lo;
    for (std::size_t i = lb[b].start; i < end; ++i) out.fitted[i] = lb[b].mean();
  }
  for (std::size_t i = centre_lo; i <= centre_hi; ++i) out.fitted[i] = centre.mean();
  const auto& rb = right.blocks();
  for (std::size_t b = 0; b < rb.size(); ++b) {
    const std::size_t rev_end = b + 1 < rb.size() ? rb[b + 1].start : n - 1 - centre_hi;
    for (std::size_t r = rb[b].start; r < rev_end; ++r) out.fitted[n - 1 - r] = rb[b].mean();
  }
  out.sse = detail::direct_sse(out.fitted, y);
  return out;
}

/// Least-squares projection onto unimodal vectors, O(n).
///
/// Every unimodal vector is an increasing prefix followed by a decreasing
/// suffix, so one forward isotonic sweep and one backward antitonic sweep
/// give the optimal SSE of every split. Among optimal fits the smallest peak
/// position wins; the returned vector is the fixed-mode projection at that
/// peak.
inline VectorFit unimodal_fit(std::span<const double> y) {
  detail::require_nonempty(y, "unimodal_fit");
  const std::size_t n = y.size();

  // prefix_*[k]: isotonic fit of y[0, k).
  std::vector<double> prefix_sse(n + 1, 0.0);
  std::vector<double> prefix_max(n + 1, 0.0);
  std::vector<std::size_t> prefix_argmax(n + 1, 0);
  {
    detail::PavaStack s;
    s.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) {
      s.push(y[k - 1], k - 1);
      prefix_sse[k] = s.total_sse();
      prefix_max[k] = s.top().mean();
      prefix_argmax[k] = s.top().start;
    }
  }
  // suffix_*[k]: antitonic fit of y[k, n); its maximum sits at position k.
  std::vector<double> suffix_sse(n + 1, 0.0);
  std::vector<double> suffix_max(n + 1, 0.0);
  {
    detail::PavaStack s;
    s.reserve(n);
    for (std::size_t k = n; k-- > 0;) {
      s.push(y[k], n - 1 - k);
      suffix_sse[k] = s.total_sse();
      suffix_max[k] = s.top().mean();
    }
  }

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= n; ++k) best = std::min(best, prefix_sse[k] + suffix_sse[k]);
  const double tol = sse_tolerance(best);

  std::size_t peak = n;
  for (std::size_t k = 0; k <= n; ++k) {
    if (prefix_sse[k] + suffix_sse[k] > best + tol) continue;
    std::size_t p;
    if (k == 0) {
      p = 0;
    } else if (k == n || prefix_max[k] >= suffix_max[k]) {
      p = prefix_argmax[k];
    } else {
      p = k;
    }
    peak = std::min(peak, p);
  }
  return fixed_mode_fit(y, peak);
}

/// Dispatches a single-vector fit on `shape`.
inline VectorFit fit_vector(std::span<const double> y, const ShapeSpec& shape) {
  switch (shape.kind) {
    case ShapeSpec::Kind::kMonotone:
      return isotonic_fit(y);
    case ShapeSpec::Kind::kUnimodal:
      return unimodal_fit(y);
    case ShapeSpec::Kind::kFixedMode:
      return fixed_mode_fit(y, shape.peak);
  }
  throw std::invalid_argument("fit_vector: unknown shape");
}

struct ColumnFit {
  Matrix fitted;
  double sse = 0.0;  // sum of per-column SSEs
  std::vector<std::size_t> peaks;  // per column; empty for monotone fits
};

/// Projects every column of `y` independently onto the cone named by `shape`.
inline ColumnFit fit_columns(const Matrix& y, const ShapeSpec& shape) {
  ColumnFit out{Matrix(y.rows(), y.cols()), 0.0, {}};
  std::vector<double> col(y.rows());
  for (std::size_t j = 0; j < y.cols(); ++j) {
    for (std::size_t i = 0; i < y.rows(); ++i) col[i] = y(i, j);
    VectorFit f = fit_vector(col, shape);
    out.fitted.set_column(j, f.fitted);
    out.sse += f.sse;
    if (f.peak && shape.kind != ShapeSpec::Kind::kMonotone) out.peaks.push_back(*f.peak);
  }
  return out;
}

inline Matrix project_columns(const Matrix& y, const ShapeSpec& shape) {
  return fit_columns(y, shape).fitted;
}

// Membership tests, with kEps slack on each comparison.

inline bool is_increasing(std::span<const double> a, double slack = kEps) {
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i] < a[i - 1] - slack) return false;
  }
  return true;
}

inline bool is_decreasing(std::span<const double> a, double slack = kEps) {
  for (std::size_t i = 1; i < a.size(); ++i) {
    if (a[i] > a[i - 1] + slack) return false;
  }
  return true;
}

inline bool in_fixed_mode_cone(std::span<const double> a, std::size_t peak,
                               double slack = kEps) {
  if (peak >= a.size()) return false;
  return is_increasing(a.first(peak + 1), slack) && is_decreasing(a.subspan(peak), slack);
}

inline bool is_unimodal(std::span<const double> a, double slack = kEps) {
  if (a.empty()) return true;
  const auto peak = static_cast<std::size_t>(std::max_element(a.begin(), a.end()) - a.begin());
  return in_fixed_mode_cone(a, peak, slack);
}

inline bool has_increasing_columns(const Matrix& a, double slack = kEps) {
  for (std::size_t i = 1; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) < a(i - 1, j) - slack) return false;
    }
  }
  return true;
}

inline bool satisfies(const Matrix& a, const ShapeSpec& shape, double slack = kEps) {
  if (shape.kind == ShapeSpec::Kind::kMonotone) return has_increasing_columns(a, slack);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const auto col = a.column(j);
    const bool ok = shape.kind == ShapeSpec::Kind::kUnimodal
                        ? is_unimodal(col, slack)
                        : in_fixed_mode_cone(col, shape.peak, slack);
    if (!ok) return false;
  }
  return true;
}

}  // namespace seriation

#endif  // SERIATION_SHAPE_REGRESSION_HPP
