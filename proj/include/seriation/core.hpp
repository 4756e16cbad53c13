#ifndef SERIATION_CORE_HPP
#define SERIATION_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace seriation {

/// Absolute slack for equality-of-reals in invariant checks.
inline constexpr double kEps = 1e-9;

/// Relative slack used when two candidate fits are compared by SSE.
inline constexpr double kSseRelTol = 1e-12;

inline double sse_tolerance(double sse) { return kSseRelTol * (1.0 + sse); }

/// Dense real matrix, row-major. Entries are finite.
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t n_rows, std::size_t n_cols)
      : n_rows_(n_rows), n_cols_(n_cols), data_(n_rows * n_cols, 0.0) {
    if (n_rows == 0 || n_cols == 0) {
      throw std::invalid_argument("Matrix: dimensions must be positive");
    }
  }

  Matrix(std::size_t n_rows, std::size_t n_cols, std::vector<double> data)
      : n_rows_(n_rows), n_cols_(n_cols), data_(std::move(data)) {
    if (n_rows == 0 || n_cols == 0) {
      throw std::invalid_argument("Matrix: dimensions must be positive");
    }
    if (data_.size() != n_rows * n_cols) {
      throw std::invalid_argument("Matrix: data length " + std::to_string(data_.size()) +
                                  " does not match " + std::to_string(n_rows) + "x" +
                                  std::to_string(n_cols));
    }
    for (double v : data_) {
      if (!std::isfinite(v)) throw std::invalid_argument("Matrix: non-finite entry");
    }
  }

  /// Builds a matrix from nested rows; all rows must have the same length.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) {
      throw std::invalid_argument("Matrix: empty row list");
    }
    const std::size_t m = rows.front().size();
    std::vector<double> data;
    data.reserve(rows.size() * m);
    for (const auto& r : rows) {
      if (r.size() != m) throw std::invalid_argument("Matrix: ragged rows");
      data.insert(data.end(), r.begin(), r.end());
    }
    return Matrix(rows.size(), m, std::move(data));
  }

  std::size_t rows() const { return n_rows_; }
  std::size_t cols() const { return n_cols_; }
  std::size_t size() const { return data_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * n_cols_, n_cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * n_cols_, n_cols_}; }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(n_rows_);
    for (std::size_t i = 0; i < n_rows_; ++i) out[i] = data_[i * n_cols_ + j];
    return out;
  }

  void set_column(std::size_t j, std::span<const double> values) {
    for (std::size_t i = 0; i < n_rows_; ++i) data_[i * n_cols_ + j] = values[i];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool same_shape(const Matrix& other) const {
    return n_rows_ == other.n_rows_ && n_cols_ == other.n_cols_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<double> data_;
};

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
  }
}

inline Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "operator+");
  Matrix out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] += bd[k];
  return out;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "operator-");
  Matrix out = a;
  auto o = out.data();
  auto bd = b.data();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] -= bd[k];
  return out;
}

/// Squared Frobenius distance, summed in row-major order.
inline double frobenius_sq_dist(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "frobenius_sq_dist");
  auto ad = a.data();
  auto bd = b.data();
  double s = 0.0;
  for (std::size_t k = 0; k < ad.size(); ++k) {
    const double d = ad[k] - bd[k];
    s += d * d;
  }
  return s;
}

/// Bijection of {0, ..., n-1}.
///
/// Acts on matrices the way a permutation matrix does: row i of A becomes
/// row mapping[i] of the product. Indices are 0-based; the 1-based
/// permutation pi of the model corresponds to mapping[i] = pi(i + 1) - 1.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<std::size_t> mapping) : mapping_(std::move(mapping)) {
    std::vector<char> seen(mapping_.size(), 0);
    for (std::size_t v : mapping_) {
      if (v >= mapping_.size() || seen[v]) {
        throw std::invalid_argument("Permutation: mapping is not a bijection");
      }
      seen[v] = 1;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> m(n);
    std::iota(m.begin(), m.end(), std::size_t{0});
    return Permutation(std::move(m));
  }

  std::size_t size() const { return mapping_.size(); }
  std::size_t operator[](std::size_t i) const { return mapping_[i]; }
  const std::vector<std::size_t>& mapping() const { return mapping_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < mapping_.size(); ++i) {
      if (mapping_[i] != i) return false;
    }
    return true;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    return a.mapping_ <=> b.mapping_;
  }

 private:
  std::vector<std::size_t> mapping_;
};

inline Permutation inverse(const Permutation& p) {
  std::vector<std::size_t> inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = i;
  return Permutation(std::move(inv));
}

/// compose(p, q) acts as "apply q, then p": (p o q)(i) = p(q(i)).
inline Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.size() != q.size()) throw std::invalid_argument("compose: length mismatch");
  std::vector<std::size_t> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[q[i]];
  return Permutation(std::move(out));
}

/// Matrix action: row i of `a` becomes row p[i] of the result.
inline Matrix permute_rows(const Permutation& p, const Matrix& a) {
  if (p.size() != a.rows()) {
    throw std::invalid_argument("permute_rows: permutation of size " + std::to_string(p.size()) +
                                " applied to " + std::to_string(a.rows()) + " rows");
  }
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto src = a.row(i);
    std::copy(src.begin(), src.end(), out.row(p[i]).begin());
  }
  return out;
}

/// SplitMix64 generator. Fixed algorithm, so streams are identical on every
/// platform; gaussian and uniform draws are derived from raw bits here rather
/// than from <random> distributions, whose output is implementation-defined.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

  /// Standard normal via the Marsaglia polar method.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Child seed for stream `index` of `seed`; distinct indices give independent streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  Rng mix(seed ^ (0xd1b54a32d192ed03ULL * (index + 1)));
  mix();
  return mix();
}

/// Uniformly random permutation (Fisher-Yates).
inline Permutation random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(m[i - 1], m[rng.below(i)]);
  }
  return Permutation(std::move(m));
}

}  // namespace seriation

#endif  // SERIATION_CORE_HPP
