#pragma once

// Polynomial algebra in the offset variable: Chebyshev fitting and
// polynomiality verdicts, the Hilbert transform, derivatives at t = 0 and the
// discriminant machinery for algebraic Radon transforms.

#include "tomo/report.hpp"
#include "tomo/slice.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tomo {

/// Monomial-basis polynomial c[0] + c[1] t + ... ; trimmed so the leading
/// coefficient exceeds 1e-12 of the largest one (empty means zero).
struct Poly {
  std::vector<double> coeffs;

  Poly() = default;
  explicit Poly(std::vector<double> c);

  int degree() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.empty(); }
  double operator()(double t) const;
  double leading() const { return coeffs.empty() ? 0.0 : coeffs.back(); }
};

/// Chebyshev series on [lo, hi].
struct ChebSeries {
  double lo = -1.0, hi = 1.0;
  std::vector<double> c;

  double operator()(double t) const;
  ChebSeries derivative() const;
  Poly to_poly() const;
};

ChebSeries chebyshev_fit(const std::vector<double>& t, const std::vector<double>& y, int degree, double lo,
                         double hi);

enum class FitVerdict { Polynomial, NotPolynomial, Inconclusive };
std::string to_string(FitVerdict v);

struct PolyFitReport {
  int best_degree = 0;
  Poly poly;                  // monomial coefficients of the reported fit
  ChebSeries series;
  double rms_residual = 0.0;
  double max_residual = 0.0;
  double relative_residual = 0.0;
  std::vector<double> relative_by_degree;  // index = degree
  FitVerdict verdict = FitVerdict::Inconclusive;
};

constexpr double kPlateauFactor = 10.0;

/// Least-squares Chebyshev fits of degrees 0..max_degree. The reported degree is
/// the smallest with relative residual < tol; otherwise the max-degree fit is
/// reported and the plateau rule decides between not-polynomial and inconclusive.
/// Relative residuals are max|res| / scale with scale = max|y| unless given.
PolyFitReport fit_polynomial(const std::vector<double>& t, const std::vector<double>& y, int max_degree,
                             double tol = 1e-7, double scale = 0.0);

struct PolyTestOptions {
  int max_degree = 20;
  double tol = 1e-7;
  double margin = 1e-3;  // fraction of the width trimmed at each end
  int points = 64;
  QuadratureConfig quad;
};

DetectionReport test_polynomial_integrability(const Body& body, const std::vector<Direction>& directions,
                                              const PolyTestOptions& opt = {});
DetectionReport test_power_polynomiality(const Body& body, int m, const std::vector<Direction>& directions,
                                         const PolyTestOptions& opt = {});

/// f on [lo, hi], extended by zero outside.
struct OffsetFunction {
  std::function<double(double)> f;
  double lo = 0.0, hi = 0.0;
  std::vector<double> breaks;  // known kinks of f, optional
};

/// (1/pi) p.v. integral of f(s)/(t-s) ds, by singularity subtraction.
double hilbert_transform(const OffsetFunction& g, double t, double rel_tol = 1e-11);

struct HilbertValue {
  double value = 0.0;
  bool warn = false;  // interpolation error estimate above 1e-6
};

/// Same transform with f interpolated from a Chebyshev-Lobatto profile.
HilbertValue hilbert_transform(const SectionProfile& profile, double t);

struct HilbertTestOptions {
  int max_degree = 1;
  double tol = 1e-5;
  double window = 0.9;  // sample t in mid +- window * half-width
  int points = 48;
  QuadratureConfig quad;
};

DetectionReport test_hilbert_polynomiality(const Body& body, const std::vector<Direction>& directions,
                                           const HilbertTestOptions& opt = {});

/// k-th derivative at t = 0 of a Chebyshev fit to the samples with |t| <= r,
/// r = min(-b_minus, b_plus) / 2.
double derivative_at_zero(const SectionProfile& profile, int k);
double derivative_at_zero(const Body& body, const Direction& xi, int k, const QuadratureConfig& cfg = {});

/// Psi(t, w) = sum_j psi[j](t) w^j for one fixed direction.
struct AlgebraicEquation {
  std::vector<Poly> psi;

  int N() const { return static_cast<int>(psi.size()) - 1; }
  double eval(double t, double w) const;
};

AlgebraicEquation parse_equation(const nlohmann::json& j);

/// D(t) = Res_w(Psi, dPsi/dw), interpolated from Sylvester determinants.
Poly discriminant_in_w(const AlgebraicEquation& eq);
/// Same values as monomial coefficients up to the formal degree, untrimmed.
std::vector<double> discriminant_coefficients(const AlgebraicEquation& eq);

/// Upper bound on deg D from the degrees of the Sylvester entries.
int formal_discriminant_degree(const AlgebraicEquation& eq);

struct SingularityReport {
  enum class Kind { Free, Singular, DegenerateAtInfinity };
  Kind kind = Kind::Free;
  std::vector<double> roots;  // real roots of D, ascending
  bool degenerate_at_infinity = false;
  Poly discriminant;

  std::string label() const;
};

SingularityReport has_real_singularities(const AlgebraicEquation& eq);

/// All complex roots via companion-matrix eigenvalues.
std::vector<std::complex<double>> poly_roots(const Poly& p);

}  // namespace tomo
