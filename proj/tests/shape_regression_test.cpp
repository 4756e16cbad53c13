#include "seriation/shape_regression.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "seriation/dykstra.hpp"

namespace seriation {
namespace {

using Vec = std::vector<double>;

constexpr std::size_t kOracleIters = 10000;

void expect_vec_near(const Vec& got, const Vec& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "at " << i;
}

Vec random_vec(std::size_t n, Rng& rng) {
  Vec v(n);
  for (double& x : v) x = 2.0 * rng.uniform() - 1.0;
  return v;
}

double sq_dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Random point of the fixed-mode cone: cumulative positive increments up to
// the peak, cumulative negative ones after, plus an offset.
Vec random_cone_point(std::size_t n, std::size_t peak, Rng& rng) {
  Vec z(n);
  z[peak] = 2.0 * rng.uniform() - 1.0;
  for (std::size_t i = peak; i-- > 0;) z[i] = z[i + 1] - (rng.below(3) == 0 ? 0.0 : rng.uniform());
  for (std::size_t i = peak + 1; i < n; ++i) {
    z[i] = z[i - 1] - (rng.below(3) == 0 ? 0.0 : rng.uniform());
  }
  return z;
}

// --- oracle self-checks ---

TEST(DykstraOracleTest, FixedPointAndTrivialCases) {
  const Vec in_cone{1, 3, 2};
  EXPECT_EQ(dykstra_cone_projection(in_cone, 1, 10), in_cone);
  EXPECT_EQ(dykstra_cone_projection(Vec{4.0}, 0, 10), Vec{4.0});
  EXPECT_THROW(dykstra_cone_projection(Vec{1, 2}, 0, 0), std::invalid_argument);
  EXPECT_THROW(dykstra_cone_projection(Vec{1, 2}, 2, 5), std::invalid_argument);
}

TEST(DykstraOracleTest, ConvergesOnSmallExample) {
  expect_vec_near(dykstra_cone_projection(Vec{2, 1, 2}, 0, kOracleIters), Vec{2, 1.5, 1.5}, 1e-6);
}

// --- isotonic ---

TEST(IsotonicFitTest, Examples) {
  auto f = isotonic_fit(Vec{1, 2, 3});
  EXPECT_EQ(f.fitted, (Vec{1, 2, 3}));
  EXPECT_EQ(f.sse, 0.0);

  // Frozen values, cross-checked against the half-space oracle.
  f = isotonic_fit(Vec{3, 1, 2});
  expect_vec_near(f.fitted, Vec{2, 2, 2}, 1e-15);
  EXPECT_NEAR(f.sse, 2.0, 1e-12);
  expect_vec_near(dykstra_cone_projection(Vec{3, 1, 2}, 2, kOracleIters), Vec{2, 2, 2}, 1e-6);

  f = isotonic_fit(Vec{5, 5, 1, 1});
  expect_vec_near(f.fitted, Vec{3, 3, 3, 3}, 1e-15);
  EXPECT_NEAR(f.sse, 16.0, 1e-12);
  expect_vec_near(dykstra_cone_projection(Vec{5, 5, 1, 1}, 3, kOracleIters), Vec{3, 3, 3, 3},
                  1e-6);
}

TEST(IsotonicFitTest, EmptyInputRejected) {
  EXPECT_THROW(isotonic_fit(Vec{}), std::invalid_argument);
  EXPECT_THROW(antitonic_fit(Vec{}), std::invalid_argument);
  EXPECT_THROW(unimodal_fit(Vec{}), std::invalid_argument);
  EXPECT_THROW(fixed_mode_fit(Vec{}, 0), std::invalid_argument);
}

TEST(IsotonicFitTest, BlocksAreMeansOfTheirInputs) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec y = random_vec(1 + rng.below(30), rng);
    const auto f = isotonic_fit(y);
    EXPECT_TRUE(is_increasing(f.fitted, 0.0));
    std::size_t start = 0;
    for (std::size_t i = 1; i <= y.size(); ++i) {
      if (i == y.size() || f.fitted[i] != f.fitted[start]) {
        double mean = 0.0;
        for (std::size_t k = start; k < i; ++k) mean += y[k];
        mean /= static_cast<double>(i - start);
        EXPECT_NEAR(f.fitted[start], mean, 1e-12);
        start = i;
      }
    }
  }
}

// --- antitonic ---

TEST(AntitonicFitTest, Examples) {
  EXPECT_EQ(antitonic_fit(Vec{3, 2, 1}).fitted, (Vec{3, 2, 1}));
  const auto f = antitonic_fit(Vec{1, 3});
  expect_vec_near(f.fitted, Vec{2, 2}, 1e-15);
  EXPECT_NEAR(f.sse, 2.0, 1e-12);
  expect_vec_near(dykstra_cone_projection(Vec{1, 3}, 0, kOracleIters), Vec{2, 2}, 1e-6);
}

TEST(AntitonicFitTest, ReverseOfIsotonic) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec y = random_vec(1 + rng.below(12), rng);
    Vec rev(y.rbegin(), y.rend());
    Vec expect = isotonic_fit(rev).fitted;
    std::reverse(expect.begin(), expect.end());
    EXPECT_EQ(antitonic_fit(y).fitted, expect);
  }
}

// --- fixed mode ---

TEST(FixedModeFitTest, Examples) {
  auto f = fixed_mode_fit(Vec{1, 3, 2}, 1);
  EXPECT_EQ(f.fitted, (Vec{1, 3, 2}));
  EXPECT_EQ(f.sse, 0.0);

  f = fixed_mode_fit(Vec{2, 1, 2}, 0);
  expect_vec_near(f.fitted, Vec{2, 1.5, 1.5}, 1e-15);
  EXPECT_NEAR(f.sse, 0.5, 1e-12);

  f = fixed_mode_fit(Vec{2, 1, 2}, 2);
  expect_vec_near(f.fitted, Vec{1.5, 1.5, 2}, 1e-15);
  EXPECT_NEAR(f.sse, 0.5, 1e-12);
  expect_vec_near(dykstra_cone_projection(Vec{2, 1, 2}, 2, kOracleIters), Vec{1.5, 1.5, 2}, 1e-6);
}

TEST(FixedModeFitTest, PeakOutOfRange) {
  EXPECT_THROW(fixed_mode_fit(Vec{1, 2}, 2), std::invalid_argument);
  EXPECT_THROW(fit_vector(Vec{1, 2}, ShapeSpec::fixed_mode(5)), std::invalid_argument);
}

TEST(FixedModeFitTest, CouplingAtPeakBinds) {
  // Independent prefix/suffix fits would give [0, 5, 6, 0]; the peak pools.
  const Vec y{0, 5, 6, 0};
  const auto f = fixed_mode_fit(y, 1);
  expect_vec_near(f.fitted, dykstra_cone_projection(y, 1, kOracleIters), 1e-6);
  expect_vec_near(f.fitted, Vec{0, 5.5, 5.5, 0}, 1e-12);
}

TEST(FixedModeFitTest, MatchesDykstraOnRandomVectors) {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const Vec y = random_vec(n, rng);
    const std::size_t peak = rng.below(n);
    const auto f = fixed_mode_fit(y, peak);
    expect_vec_near(f.fitted, dykstra_cone_projection(y, peak, kOracleIters, 1e-15), 1e-6);
    EXPECT_TRUE(in_fixed_mode_cone(f.fitted, peak));
    EXPECT_NEAR(f.sse, sq_dist(f.fitted, y), 1e-12 * (1 + f.sse));
  }
}

// --- unimodal ---

TEST(UnimodalFitTest, Examples) {
  auto f = unimodal_fit(Vec{1, 3, 2});
  EXPECT_EQ(f.fitted, (Vec{1, 3, 2}));
  EXPECT_EQ(f.sse, 0.0);
  EXPECT_EQ(f.peak, 1u);

  // Peaks 0 and 2 tie at SSE 0.5; the smaller wins.
  f = unimodal_fit(Vec{2, 1, 2});
  expect_vec_near(f.fitted, Vec{2, 1.5, 1.5}, 1e-15);
  EXPECT_NEAR(f.sse, 0.5, 1e-12);
  EXPECT_EQ(f.peak, 0u);

  f = unimodal_fit(Vec{1, 2, 3});
  EXPECT_EQ(f.fitted, (Vec{1, 2, 3}));
  EXPECT_EQ(f.peak, 2u);
}

TEST(UnimodalFitTest, DegenerateInputs) {
  auto f = unimodal_fit(Vec{7});
  EXPECT_EQ(f.fitted, Vec{7});
  EXPECT_EQ(f.peak, 0u);
  f = unimodal_fit(Vec{4, 4, 4, 4});
  EXPECT_EQ(f.fitted, (Vec{4, 4, 4, 4}));
  EXPECT_EQ(f.peak, 0u);
  EXPECT_EQ(isotonic_fit(Vec{7}).fitted, Vec{7});
  EXPECT_EQ(fixed_mode_fit(Vec{7}, 0).fitted, Vec{7});
}

TEST(UnimodalFitTest, MatchesBestFixedMode) {
  Rng rng(10);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    Vec y = random_vec(n, rng);
    if (trial % 4 == 0) {
      for (double& v : y) v = std::round(v * 2.0);  // force ties
    }
    double best = INFINITY;
    std::size_t best_peak = 0;
    for (std::size_t l = 0; l < n; ++l) {
      const double s = fixed_mode_fit(y, l).sse;
      if (l == 0 || s < best - sse_tolerance(best)) {
        best = s;
        best_peak = l;
      }
    }
    const auto f = unimodal_fit(y);
    EXPECT_NEAR(f.sse, best, 1e-10 * (1 + best));
    EXPECT_EQ(*f.peak, best_peak) << "trial " << trial;
    EXPECT_TRUE(is_unimodal(f.fitted));
  }
}

// --- projection properties ---

ShapeSpec random_convex_shape(std::size_t n, Rng& rng) {
  return rng.below(2) == 0 ? ShapeSpec::monotone() : ShapeSpec::fixed_mode(rng.below(n));
}

Vec random_point_in(const ShapeSpec& s, std::size_t n, Rng& rng) {
  if (s.kind == ShapeSpec::Kind::kMonotone) return random_cone_point(n, n - 1, rng);
  return random_cone_point(n, s.peak, rng);
}

TEST(ProjectionPropertyTest, OptimalityAgainstRandomFeasiblePoints) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const Vec y = random_vec(n, rng);
    for (ShapeSpec s : {ShapeSpec::monotone(), ShapeSpec::fixed_mode(rng.below(n)),
                        ShapeSpec::unimodal()}) {
      const auto f = fit_vector(y, s);
      for (int k = 0; k < 1000; ++k) {
        const ShapeSpec sample_shape =
            s.kind == ShapeSpec::Kind::kUnimodal ? ShapeSpec::fixed_mode(rng.below(n)) : s;
        const Vec z = random_point_in(sample_shape, n, rng);
        ASSERT_LE(f.sse, sq_dist(z, y) + 1e-9);
      }
    }
  }
}

TEST(ProjectionPropertyTest, Idempotence) {
  Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    const Vec y = random_vec(n, rng);
    for (ShapeSpec s : {ShapeSpec::monotone(), ShapeSpec::unimodal(),
                        ShapeSpec::fixed_mode(rng.below(n))}) {
      const auto once = fit_vector(y, s);
      const auto twice = fit_vector(once.fitted, s);
      expect_vec_near(twice.fitted, once.fitted, kEps);
      EXPECT_LE(twice.sse, kEps);
    }
  }
}

TEST(ProjectionPropertyTest, Contraction) {
  Rng rng(14);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    const Vec a = random_vec(n, rng);
    const Vec b = random_vec(n, rng);
    const ShapeSpec s = random_convex_shape(n, rng);
    const double d_fit = sq_dist(fit_vector(a, s).fitted, fit_vector(b, s).fitted);
    EXPECT_LE(d_fit, sq_dist(a, b) + 1e-12);
  }
}

TEST(ProjectionPropertyTest, ObtuseAngleWithConePoints) {
  Rng rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const Vec y = random_vec(n, rng);
    const ShapeSpec s = random_convex_shape(n, rng);
    const Vec fit = fit_vector(y, s).fitted;
    for (int k = 0; k < 50; ++k) {
      const Vec z = random_point_in(s, n, rng);
      double inner = 0.0;
      for (std::size_t i = 0; i < n; ++i) inner += (y[i] - fit[i]) * (z[i] - fit[i]);
      EXPECT_LE(inner, kEps);
    }
  }
}

TEST(ProjectionPropertyTest, TranslationEquivariance) {
  Rng rng(16);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    const Vec y = random_vec(n, rng);
    const double c = 10.0 * rng.uniform() - 5.0;
    Vec shifted = y;
    for (double& v : shifted) v += c;
    for (ShapeSpec s : {ShapeSpec::monotone(), ShapeSpec::fixed_mode(rng.below(n))}) {
      Vec expect = fit_vector(y, s).fitted;
      for (double& v : expect) v += c;
      expect_vec_near(fit_vector(shifted, s).fitted, expect, kEps);
    }
  }
}

// --- matrices ---

TEST(ProjectColumnsTest, Examples) {
  const Matrix in_cone = Matrix::from_rows({{0, 1}, {1, 1}, {2, 5}});
  EXPECT_EQ(project_columns(in_cone, ShapeSpec::monotone()), in_cone);

  const Matrix y = Matrix::from_rows({{3, 1}, {1, 2}, {2, 3}});
  const ColumnFit f = fit_columns(y, ShapeSpec::monotone());
  EXPECT_EQ(f.fitted.column(0), (Vec{2, 2, 2}));
  EXPECT_EQ(f.fitted.column(1), (Vec{1, 2, 3}));
  EXPECT_NEAR(f.sse, 2.0, 1e-12);
  EXPECT_TRUE(satisfies(f.fitted, ShapeSpec::monotone()));
}

TEST(ProjectColumnsTest, SingleColumnMatchesVectorFit) {
  Rng rng(18);
  const Vec y = random_vec(9, rng);
  const Matrix ym(9, 1, y);
  EXPECT_EQ(project_columns(ym, ShapeSpec::unimodal()).column(0), unimodal_fit(y).fitted);
  EXPECT_EQ(project_columns(ym, ShapeSpec::monotone()).column(0), isotonic_fit(y).fitted);
}

TEST(ProjectColumnsTest, TotalSseIsSumOfColumns) {
  Rng rng(19);
  Matrix y(6, 4);
  for (double& v : y.data()) v = rng.gaussian();
  const ColumnFit f = fit_columns(y, ShapeSpec::unimodal());
  double total = 0.0;
  for (std::size_t j = 0; j < y.cols(); ++j) total += unimodal_fit(y.column(j)).sse;
  EXPECT_NEAR(f.sse, total, 1e-12);
  EXPECT_EQ(f.peaks.size(), 4u);
  EXPECT_TRUE(satisfies(f.fitted, ShapeSpec::unimodal()));
}

}  // namespace
}  // namespace seriation
