#pragma once

// Tangency exponents of section functions and the oscillatory integral
// I(lambda) = i lambda chi^(lambda xi) with its finite-expansion test.

#include "tomo/polyalg.hpp"
#include "tomo/slice.hpp"

#include <complex>
#include <vector>

namespace tomo {

struct ExponentFit {
  double alpha = 0.0;
  double fit_error = 0.0;  // rms of the log-log residuals
  std::vector<double> s, values;
};

/// Log-log slope of A(xi, b_plus - s) for s log-spaced in [1e-6, window] * width.
ExponentFit boundary_exponent(const Body& body, const Direction& xi, double window = 1e-2, int points = 24,
                              const QuadratureConfig& cfg = {});

/// I(lambda) = i lambda chi^(lambda xi), the boundary integral of e^{i lambda <x,xi>} <xi, n>.
std::complex<double> oscillatory_integral(const Body& body, const Direction& xi, double lambda,
                                          const QuadratureConfig& cfg = {});

/// The same quantity by direct quadrature over the ellipsoid surface x = c + L u, u on the sphere.
std::complex<double> ellipsoid_surface_integral(const Ellipsoid& e, const Direction& xi, double lambda);

/// 64 log-spaced points in [10/width, 2000/width].
std::vector<double> default_lambda_grid(const Body& body, const Direction& xi, int points = 64);

struct ExpansionFitReport {
  double b_plus = 0.0, b_minus = 0.0;
  int degree = 0;
  std::vector<std::complex<double>> q_plus, q_minus;  // coefficients of lambda^{-j}
  double relative_residual = 0.0;
  std::vector<double> residual_by_degree;
  std::vector<double> lambdas;
  std::vector<std::complex<double>> values;
  std::string verdict = "inconclusive";  // finite / not finite / inconclusive
};

/// Fits I(lambda) against e^{i lambda b_pm} lambda^{-j}, j = 0..d. Rows are
/// weighted by the local envelope of |I| so decaying tails count as much as the head.
ExpansionFitReport finite_expansion_test(const Body& body, const Direction& xi, const std::vector<double>& lambdas,
                                         int degree, double tol = 1e-7, const QuadratureConfig& cfg = {});

/// Fit only, for values computed elsewhere.
ExpansionFitReport fit_expansion(const std::vector<double>& lambdas, const std::vector<std::complex<double>>& values,
                                 double b_minus, double b_plus, int degree, double tol);

}  // namespace tomo
