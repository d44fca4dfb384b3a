#pragma once

// Offset moments of section functions, homogeneous range conditions, the
// tangent-measure recurrences and the support-product ellipsoid detector.

#include "tomo/polyalg.hpp"
#include "tomo/quadrature.hpp"
#include "tomo/report.hpp"
#include "tomo/slice.hpp"

#include <functional>
#include <vector>

namespace tomo {

struct MomentTable {
  int k = 0;
  DirectionGrid grid;
  std::vector<double> values;
  double magnitude = 0.0;  // reference size for relative residuals (0: use max |value|)
};

/// M_k(xi) = integral of A(xi,t) t^k dt, by adaptive quadrature.
double moment(const Body& body, const Direction& xi, int k, const QuadratureConfig& cfg = {});

/// M_0..M_kmax (entry k) plus the magnitudes integral of A |t|^k, from one set
/// of section evaluations refined until every entry settles.
struct MomentVector {
  std::vector<double> moments;
  std::vector<double> magnitudes;
};
MomentVector moments_upto(const Body& body, const Direction& xi, int kmax, const QuadratureConfig& cfg = {});

/// Tables for k = 0..kmax on `grid`.
std::vector<MomentTable> moment_tables(const Body& body, const DirectionGrid& grid, int kmax,
                                       const QuadratureConfig& cfg = {});

/// Exponent tuples of all degree-k monomials in n variables, lexicographically descending.
std::vector<std::vector<int>> monomial_exponents(int n, int k);

struct HomogeneousFitReport {
  int k = 0;
  std::vector<std::vector<int>> exponents;
  std::vector<double> coefficients;
  double relative_residual = 0.0;
  double parity_residual = 0.0;   // size of the wrong-parity part
  bool passed = false;

  std::string verdict() const { return passed ? "polynomial" : "not-polynomial"; }
};

/// Least-squares fit of the table against degree-k monomials, after splitting
/// off the parity component that a degree-k form cannot have.
HomogeneousFitReport fit_homogeneous(const MomentTable& table, double tol = 1e-6);

/// q(xi) delta(p - h(xi)) sampled on an antipodally closed grid.
struct TangentMeasure {
  DirectionGrid grid;
  std::vector<double> q;
  std::vector<double> h;
};

TangentMeasure tangent_measure(const Body& body, const DirectionGrid& grid,
                               const std::function<double(const Direction&)>& q);

/// p_k = q h^k + (-1)^k q(-xi) h(-xi)^k, pointwise.
MomentTable tangent_moments(const TangentMeasure& tm, int k);

Mat build_S_order0(double h, double hc);
Mat build_T_order0(double h, double hc);
Mat build_S_order1(double h, double hc);
Mat build_T_order1(double h, double hc);

/// p_k of an order-1 tangent measure with weights (a0, a1) on the plane at h and
/// (b0, b1) on the plane at -hc: each plane x contributes a x^k - b k x^(k-1).
double order1_moment(double h, double hc, double a0, double a1, double b0, double b1, int k);

/// max over the grid and k of |S P_k - P_{k+1}| with P_k = (p_k, p_{k+1}).
double geometric_series_check(const std::vector<MomentTable>& p, const TangentMeasure& tm);

struct SupportProductEstimate {
  std::vector<double> value;      // estimate of h(xi) h(-xi)
  std::vector<bool> degenerate;   // |det(P0,P1)| below the floor
  std::size_t degenerate_count() const;
};

constexpr double kDegeneracyFloor = 1e-10;

SupportProductEstimate recover_support_product(const std::vector<MomentTable>& p);

struct DetectOptions {
  int grid_polar = 48, grid_azimuth = 96;  // n = 3
  int grid_circle = 720;                   // n = 2
  double tol = 1e-7;
};

DirectionGrid detection_grid(int dim, const DetectOptions& opt = {});

DetectionReport support_product_quadratic_test(const Body& body, const std::vector<Vec>& translates,
                                               const DirectionGrid& grid, double tol = 1e-7);

std::vector<Vec> default_translates(const Body& body);

DetectionReport detect_ellipsoid(const Body& body, const DetectOptions& opt = {});

}  // namespace tomo
