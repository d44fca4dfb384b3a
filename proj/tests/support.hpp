#pragma once

// Random test subjects shared by the unit and acceptance suites.

#include "tomo/bodies.hpp"

#include <random>

namespace tomo::testing {

using Rng = std::mt19937_64;

inline Vec gaussian_vec(int n, Rng& rng) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

inline Direction random_direction(int n, Rng& rng) {
  Vec v = gaussian_vec(n, rng);
  while (v.norm() < 1e-3) v = gaussian_vec(n, rng);
  return Direction(v);
}

/// Q diag(lambda) Q^T with eigenvalues in [lo, hi] and Haar-ish Q.
inline Mat random_spd(int n, Rng& rng, double lo = 0.3, double hi = 2.0) {
  Mat g(n, n);
  for (int j = 0; j < n; ++j) g.col(j) = gaussian_vec(n, rng);
  const Mat q = g.householderQr().householderQ();
  std::uniform_real_distribution<double> u(lo, hi);
  Vec ev(n);
  for (int i = 0; i < n; ++i) ev[i] = u(rng);
  Mat a = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

inline Ellipsoid random_ellipsoid(int n, Rng& rng, bool centered = false, double center_scale = 0.5) {
  std::uniform_real_distribution<double> u(-center_scale, center_scale);
  Vec c = Vec::Zero(n);
  if (!centered)
    for (int i = 0; i < n; ++i) c[i] = u(rng);
  return Ellipsoid::make(random_spd(n, rng), c);
}

/// Uniform sample of K by rejection from its bounding box.
inline Vec random_member(const Body& body, Rng& rng) {
  const double r = bounding_radius(body);
  std::uniform_real_distribution<double> u(-r, r);
  for (;;) {
    Vec x(body.dim());
    for (int i = 0; i < body.dim(); ++i) x[i] = u(rng);
    if (membership(body, x)) return x;
  }
}

inline Polytope square() { return Polytope::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)); }
inline Polytope cube() { return Polytope::box(Vec::Constant(3, -1.0), Vec::Constant(3, 1.0)); }
inline LpBall lp4(int n) { return LpBall::make(4.0, Vec::Ones(n), Vec::Zero(n)); }

}  // namespace tomo::testing
