#pragma once

// Quadrature rules, direction grids on S^{n-1} and the counter-based sampler.

#include "tomo/bodies.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace tomo {

struct GaussRule {
  std::vector<double> nodes;    // ascending, in (-1, 1)
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]. Rules are cached per n.
const GaussRule& gauss_legendre(int n);

/// Chebyshev-Lobatto points (extrema, endpoints included) on [lo, hi], ascending.
std::vector<double> chebyshev_lobatto(double lo, double hi, int n);
/// Chebyshev points of the first kind (roots, endpoints excluded) on [lo, hi], ascending.
std::vector<double> chebyshev_roots(double lo, double hi, int n);

/// Quadrature grid on the unit sphere that is closed under xi -> -xi.
struct DirectionGrid {
  int dim = 0;
  std::vector<Direction> dirs;
  std::vector<double> weights;  // sum = |S^{n-1}|
  std::vector<int> antipode;    // dirs[antipode[i]] == -dirs[i]

  std::size_t size() const { return dirs.size(); }

  /// m equispaced angles theta_j = 2 pi j / m (m even).
  static DirectionGrid circle(int m);
  /// Gauss-Legendre in cos(polar) x trapezoid in azimuth; `axis` is the pole.
  static DirectionGrid sphere(int n_polar, int n_azimuth, const Vec& axis = Vec());
  /// 720 angles in R^2, 48 x 96 product grid in R^3.
  static DirectionGrid standard(int dim);
};

/// Golden-angle / Fibonacci style direction sets used as default probes.
std::vector<Direction> probe_directions(int dim, int count);

/// Stateless counter-based uniform generator: draw(i) depends only on (key, i).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}
  double uniform(std::uint64_t counter) const;  // [0, 1)
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b);
  static std::uint64_t mix(std::uint64_t a, double b);

 private:
  std::uint64_t key_;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod over the panels cut by `breaks` (sorted, inside (a,b)).
/// Throws QuadratureError when the estimate misses `rel_tol` after max refinement.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const std::vector<double>& breaks = {}, double rel_tol = 1e-12,
                              double abs_floor = 0.0);

/// Complex variant used for oscillatory integrands.
std::complex<double> integrate_adaptive_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const std::vector<double>& breaks, double rel_tol = 1e-12);

}  // namespace tomo
