#ifndef SERIATION_DYKSTRA_HPP
#define SERIATION_DYKSTRA_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace seriation {

/// Slow reference projection onto the fixed-mode cone, for testing.
///
/// Runs Dykstra's alternating projections over the pairwise half-spaces that
/// make up the two chains: a[i] <= a[i+1] for i < peak, and a[i] >= a[i+1]
/// for i >= peak. Each half-space projection is a two-point average, so the
/// result shares no code with the pooling algorithms. peak = n - 1 gives the
/// isotonic cone. Stops after `iters` sweeps or once a sweep moves no entry
/// by more than `tol`.
inline std::vector<double> dykstra_cone_projection(std::span<const double> y, std::size_t peak,
                                                   std::size_t iters, double tol = 0.0) {
  if (iters == 0) throw std::invalid_argument("dykstra_cone_projection: iters must be >= 1");
  const std::size_t n = y.size();
  if (n == 0) throw std::invalid_argument("dykstra_cone_projection: empty input vector");
  if (peak >= n) throw std::invalid_argument("dykstra_cone_projection: peak out of range");

  std::vector<double> x(y.begin(), y.end());
  if (n == 1) return x;
  // Correction terms for half-space k: only the two touched coordinates.
  std::vector<double> corr_lo(n - 1, 0.0);
  std::vector<double> corr_hi(n - 1, 0.0);

  for (std::size_t it = 0; it < iters; ++it) {
    double moved = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double a = x[k] + corr_lo[k];
      const double b = x[k + 1] + corr_hi[k];
      double pa = a;
      double pb = b;
      const bool violated = k < peak ? a > b : a < b;
      if (violated) pa = pb = 0.5 * (a + b);
      corr_lo[k] = a - pa;
      corr_hi[k] = b - pb;
      moved = std::max(moved, std::max(std::abs(pa - x[k]), std::abs(pb - x[k + 1])));
      x[k] = pa;
      x[k + 1] = pb;
    }
    if (moved <= tol) break;
  }
  return x;
}

}  // namespace seriation

#endif  // SERIATION_DYKSTRA_HPP
