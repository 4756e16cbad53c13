#ifndef SERIATION_SYNTH_HPP
#define SERIATION_SYNTH_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seriation/core.hpp"
#include "seriation/io.hpp"
#include "seriation/shape_regression.hpp"

namespace seriation {

enum class Family {
  kSparseRows,        // first column (1..n) sqrt(m), other columns zero
  kIdenticalColumns,  // every column (1..n) / n
  kTriangular,        // A(i, j) = 1 if i >= j
  kRandomVBounded,    // columns are sorted U(0, 1) samples
  kRandomKBlocks,     // columns piecewise constant on `blocks` contiguous blocks
  kCustom,            // loaded from a CSV file
};

struct GeneratorSpec {
  Family family = Family::kSparseRows;
  std::size_t n = 1;
  std::size_t m = 1;
  std::size_t blocks = 5;
  std::string path;  // kCustom only
  std::uint64_t seed = 0;
};

enum class NoiseKind { kGaussian, kRademacher, kNone };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::kGaussian;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::kSparseRows: return "sparse-rows";
    case Family::kIdenticalColumns: return "identical-columns";
    case Family::kTriangular: return "triangular";
    case Family::kRandomVBounded: return "random-v";
    case Family::kRandomKBlocks: return "random-k-blocks";
    case Family::kCustom: return "custom";
  }
  return "?";
}

inline Family parse_family(std::string_view name) {
  for (Family f : {Family::kSparseRows, Family::kIdenticalColumns, Family::kTriangular,
                   Family::kRandomVBounded, Family::kRandomKBlocks, Family::kCustom}) {
    if (family_name(f) == name) return f;
  }
  throw std::invalid_argument("unknown generator family '" + std::string(name) + "'");
}

inline std::string_view noise_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::kGaussian: return "gaussian";
    case NoiseKind::kRademacher: return "rademacher";
    case NoiseKind::kNone: return "none";
  }
  return "?";
}

inline NoiseKind parse_noise(std::string_view name) {
  for (NoiseKind k : {NoiseKind::kGaussian, NoiseKind::kRademacher, NoiseKind::kNone}) {
    if (noise_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown noise kind '" + std::string(name) + "'");
}

/// Sizes of `blocks` contiguous blocks covering n rows: the first n % blocks
/// blocks get one extra row.
inline std::vector<std::size_t> block_sizes(std::size_t n, std::size_t blocks) {
  if (blocks == 0 || blocks > n) {
    throw std::invalid_argument("block_sizes: need 1 <= blocks <= n (blocks = " +
                                std::to_string(blocks) + ", n = " + std::to_string(n) + ")");
  }
  std::vector<std::size_t> sizes(blocks, n / blocks);
  for (std::size_t b = 0; b < n % blocks; ++b) ++sizes[b];
  return sizes;
}

/// Ground-truth matrix with increasing columns.
inline Matrix gen_truth(const GeneratorSpec& spec) {
  const std::size_t n = spec.n;
  const std::size_t m = spec.m;
  if (spec.family == Family::kCustom) {
    Matrix a = io::read_matrix_csv(spec.path);
    if (!has_increasing_columns(a, 0.0)) {
      throw std::invalid_argument("gen_truth: " + spec.path + " does not have increasing columns");
    }
    return a;
  }
  if (n == 0 || m == 0) throw std::invalid_argument("gen_truth: n and m must be positive");

  Matrix a(n, m);
  Rng rng(spec.seed);
  std::vector<double> col(n);
  switch (spec.family) {
    case Family::kSparseRows: {
      const double step = std::sqrt(static_cast<double>(m));
      for (std::size_t i = 0; i < n; ++i) a(i, 0) = static_cast<double>(i + 1) * step;
      break;
    }
    case Family::kIdenticalColumns:
      for (std::size_t i = 0; i < n; ++i) {
        const double v = static_cast<double>(i + 1) / static_cast<double>(n);
        for (std::size_t j = 0; j < m; ++j) a(i, j) = v;
      }
      break;
    case Family::kTriangular:
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= std::min(i, m - 1); ++j) a(i, j) = 1.0;
      }
      break;
    case Family::kRandomVBounded:
      for (std::size_t j = 0; j < m; ++j) {
        for (double& v : col) v = rng.uniform();
        std::sort(col.begin(), col.end());
        a.set_column(j, col);
      }
      break;
    case Family::kRandomKBlocks: {
      const auto sizes = block_sizes(n, spec.blocks);
      std::vector<double> levels(spec.blocks);
      for (std::size_t j = 0; j < m; ++j) {
        for (double& v : levels) v = rng.uniform();
        std::sort(levels.begin(), levels.end());
        std::size_t i = 0;
        for (std::size_t b = 0; b < sizes.size(); ++b) {
          for (std::size_t r = 0; r < sizes[b]; ++r) col[i++] = levels[b];
        }
        a.set_column(j, col);
      }
      break;
    }
    case Family::kCustom:
      break;
  }
  return a;
}

/// Noise matrix filled in row-major order from the seeded stream.
inline Matrix gen_noise(const NoiseSpec& spec, std::size_t n, std::size_t m) {
  if (spec.sigma < 0.0) throw std::invalid_argument("gen_noise: sigma must be nonnegative");
  Matrix z(n, m);
  if (spec.kind == NoiseKind::kNone) return z;
  Rng rng(spec.seed);
  auto d = z.data();
  if (spec.kind == NoiseKind::kGaussian) {
    for (double& v : d) v = spec.sigma * rng.gaussian();
  } else {
    for (double& v : d) v = (rng() >> 63) ? spec.sigma : -spec.sigma;
  }
  return z;
}

/// Y = p truth + Z.
inline Matrix gen_observation(const Matrix& truth, const Permutation& p, const NoiseSpec& noise) {
  return permute_rows(p, truth) + gen_noise(noise, truth.rows(), truth.cols());
}

}  // namespace seriation

#endif  // SERIATION_SYNTH_HPP
