#pragma once

// Real orthonormal circular / spherical harmonic expansion of xi -> A(xi, t)
// and polynomiality of the coefficient profiles in t.

#include "tomo/polyalg.hpp"
#include "tomo/quadrature.hpp"
#include "tomo/report.hpp"
#include "tomo/slice.hpp"

#include <vector>

namespace tomo {

struct HarmonicIndex {
  int k = 0;
  int alpha = 1;  // 1..d_k
};

/// n = 2: 1/sqrt(2 pi), cos(k th)/sqrt(pi), sin(k th)/sqrt(pi).
/// n = 3: alpha = k + 1 + m, m = -k..k; m > 0 cosine, m < 0 sine, no Condon-Shortley phase.
std::vector<HarmonicIndex> harmonic_indices(int dim, int L);
std::vector<double> harmonic_values(int dim, int L, const Direction& xi);

/// Quadrature grid plus basis samples; discrete orthonormality is checked on construction.
class HarmonicBasis {
 public:
  HarmonicBasis(int dim, int L);

  int dim() const { return dim_; }
  int max_degree() const { return L_; }
  const std::vector<HarmonicIndex>& indices() const { return idx_; }
  const DirectionGrid& grid() const { return grid_; }
  double orthonormality_error() const { return ortho_err_; }

  /// Projections of samples f(grid.dirs[i]) onto every basis function.
  std::vector<double> project(const std::vector<double>& samples) const;

 private:
  int dim_, L_;
  std::vector<HarmonicIndex> idx_;
  DirectionGrid grid_;
  Mat y_;  // grid x basis
  double ortho_err_ = 0.0;
};

/// min over a fine direction grid of h(xi); needs the origin inside the body.
double inradius_about_origin(const Body& body);

struct HarmonicSample {
  double t = 0.0;
  std::vector<HarmonicIndex> index;
  std::vector<double> values;
  std::vector<double> section;  // A on the basis grid, for Parseval checks
};

HarmonicSample harmonic_coefficients(const Body& body, double t, const HarmonicBasis& basis,
                                     const QuadratureConfig& cfg = {});
HarmonicSample harmonic_coefficients(const Body& body, double t, int L, const QuadratureConfig& cfg = {});

struct HarmonicTestOptions {
  int L = 4;
  double window = 0.0;  // half-width of the t window; 0 means inradius / 2
  double tol = 1e-6;
  int points = 24;
  QuadratureConfig quad;
};

struct HarmonicProfile {
  HarmonicIndex index;
  std::vector<double> t, values;
};

DetectionReport test_coefficient_polynomiality(const Body& body, const HarmonicTestOptions& opt = {},
                                               std::vector<HarmonicProfile>* profiles = nullptr);

}  // namespace tomo
